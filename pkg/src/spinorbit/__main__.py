import sys

from spinorbit.cli import main

sys.exit(main())
