# -*- coding: utf-8 -*-
from __future__ import unicode_literals


class CodeSwitchError(Exception):
	"""
	Spoločný predok všetkých chýb projektu. Príkazy manage.py podľa atribútu
	`exit_code` určujú návratový kód.
	"""

	exit_code = 1


class ConfigError(CodeSwitchError):
	exit_code = 2

	def __init__(self, message, errors=None):
		super(ConfigError, self).__init__(message)
		self.errors = errors or {}


class CompatibilityError(CodeSwitchError):
	exit_code = 2


class NumericError(CodeSwitchError):
	exit_code = 3


class ContainerError(CodeSwitchError):
	def __init__(self, path, message, array=None):
		super(ContainerError, self).__init__("%s: %s" % (path, message))
		self.path = path
		self.array = array
