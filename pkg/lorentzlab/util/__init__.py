from .util import *