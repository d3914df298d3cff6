from .spaces import *
from .conf import *
from .seeding import *
from .ascent import *
from .weak_norms import *
from .maps import *
from .witnesses import *
from .index_lab import *
from .oracles import *
from .cli import *

# Silence our logging during tests
from logging import NullHandler

from armstrong.labs.summability import logger

logger.addHandler(NullHandler())
logger.propagate = False
