# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from django.apps import AppConfig
from django.conf import settings


class TensorConfig(AppConfig):
	name = 'tensor'
	verbose_name = 'Autodiff tensors'

	def ready(self):
		from .core import set_debug
		set_debug(getattr(settings, 'CODESWITCH_TENSOR_DEBUG', False))
