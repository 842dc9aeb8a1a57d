import sys

from nfheat.cli import main

sys.exit(main())
