# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from django.apps import AppConfig


class ModelAppConfig(AppConfig):
	name = 'model'
	verbose_name = 'Networks and checkpoints'
