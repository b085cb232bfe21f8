# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from common_utils.exceptions import CodeSwitchError, ConfigError


class CorpusConfigError(ConfigError):
	pass


class SynthesisError(CodeSwitchError):
	exit_code = 2


class ManifestError(CodeSwitchError):
	def __init__(self, path, lineno, message):
		super(ManifestError, self).__init__("%s:%d: %s" % (path, lineno, message))
		self.path = path
		self.lineno = lineno
