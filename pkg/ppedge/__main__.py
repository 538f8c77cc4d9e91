####################################################################################################
# ppedge/__main__.py
# Entry point for python -m ppedge.

import sys
from .cmdline import main

if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
