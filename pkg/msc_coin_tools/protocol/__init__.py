from .states import *
from .transcript import *
from .honest import *
from .attack import *
from .experiment import *
from .crosscheck import *
