__version__ = "1.0.0"

from . import utils
from . import log
from . import json
from . import algebra
from . import geometry
from . import lift
from . import families
from . import harness
from . import cli
