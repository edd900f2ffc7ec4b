import sys

from slicesla.cli import main

sys.exit(main())
