# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from common_utils.exceptions import ContainerError


class CheckpointError(ContainerError):
	pass
