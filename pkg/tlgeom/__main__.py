import sys

import tlgeom.cli

sys.exit(tlgeom.cli.main())
