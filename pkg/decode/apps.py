# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from django.apps import AppConfig


class DecodeAppConfig(AppConfig):
	name = 'decode'
	verbose_name = 'Non-autoregressive decoding'
