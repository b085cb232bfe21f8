# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from common_utils.exceptions import CodeSwitchError


class VocabularyError(CodeSwitchError):
	exit_code = 2


class PinyinCoverageError(VocabularyError):
	def __init__(self, char):
		super(PinyinCoverageError, self).__init__("character %r has no pinyin in the table" % char)
		self.char = char
