import sys

from minsurf.cli import main

sys.exit(main())
