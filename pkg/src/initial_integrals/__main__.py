import sys

from initial_integrals.cli import main

sys.exit(main())
