# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from django.apps import AppConfig


class LossAppConfig(AppConfig):
	name = 'loss'
	verbose_name = 'Training objectives'
