import sys

from modalcount.cli import main

sys.exit(main())
