import sys

from gaussopt.cli import main

sys.exit(main())
