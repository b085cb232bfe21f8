# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from common_utils.exceptions import CodeSwitchError


class ScoreError(CodeSwitchError):
	exit_code = 2
