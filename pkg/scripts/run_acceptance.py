"""Run the acceptance suite and print only the PASS/FAIL summary."""

import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

if __name__ == "__main__":
    res = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                          str(ROOT / "tests" / "test_acceptance.py")], capture_output=True, text=True)
    lines = res.stdout.splitlines()
    start = next((i for i, ln in enumerate(lines) if "acceptance criteria" in ln), None)
    if start is None:
        sys.stdout.write(res.stdout + res.stderr)
    else:
        print("\n".join(ln for ln in lines[start + 1:] if ln.startswith("criterion")))
    sys.exit(res.returncode)
