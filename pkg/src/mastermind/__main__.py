import sys

from mastermind.cli import main

sys.exit(main())
