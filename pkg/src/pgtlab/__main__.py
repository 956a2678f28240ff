import sys

from pgtlab.cli import main

sys.exit(main())
