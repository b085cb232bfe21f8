# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from common_utils.exceptions import CodeSwitchError, NumericError


class ShapeError(CodeSwitchError):
	exit_code = 2


class TensorIndexError(ShapeError):
	pass


class NonFiniteError(NumericError):
	pass


class GraphError(CodeSwitchError):
	pass
