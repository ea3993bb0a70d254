from .post_process import *
