# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from common_utils.exceptions import CodeSwitchError, NumericError


class LossError(CodeSwitchError):
	exit_code = 2


class CTCInfeasibleError(LossError):
	def __init__(self, target_length, required, frames):
		super(CTCInfeasibleError, self).__init__(
			"target of %d tokens needs at least %d frames, got %d" % (target_length, required, frames))
		self.required = required
		self.frames = frames


class CTCNumericError(LossError, NumericError):
	exit_code = 3


class EmptyMaskError(LossError):
	pass
