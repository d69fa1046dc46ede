import sys

from propus.cli import main

sys.exit(main())
