import sys

from faultminer.cli import main

sys.exit(main())
