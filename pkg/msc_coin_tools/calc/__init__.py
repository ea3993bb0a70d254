from .quantum import *
from .bias import *
