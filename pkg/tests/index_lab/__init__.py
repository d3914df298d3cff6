from .bounds import *
from .quotients import *
from .regression import *
from .maximize import *
