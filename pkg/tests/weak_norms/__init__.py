from ._init import *
from .base_response import *
from .single import *
from .basis import *
from .hilbert import *
from .vertex import *
from .search import *
from .properties import *
