# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from common_utils.exceptions import CodeSwitchError


class EmbeddingError(CodeSwitchError):
	exit_code = 2


class EmbeddingFormatError(EmbeddingError):
	exit_code = 1

	def __init__(self, path, lineno, message):
		super(EmbeddingFormatError, self).__init__("%s:%d: %s" % (path, lineno, message))
		self.path = path
		self.lineno = lineno
