# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from common_utils.exceptions import NumericError


class TrainingDivergedError(NumericError):
	def __init__(self, batch_id, message):
		super(TrainingDivergedError, self).__init__("batch %d: %s" % (batch_id, message))
		self.batch_id = batch_id
