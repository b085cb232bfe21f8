# -*- coding: utf-8 -*-
# pylint: disable=wildcard-import,unused-wildcard-import
from __future__ import unicode_literals

from .settings import *

DEBUG = True

CODESWITCH_TENSOR_DEBUG = True

LOGGING['loggers']['codeswitch']['level'] = 'DEBUG'

#CODESWITCH_DEFAULTS['paths'] = {
#	'data_dir': '/srv/codeswitch/corpus',
#	'exp_dir': '/srv/codeswitch/exp',
#}
