# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from django.apps import AppConfig


class ScoreConfig(AppConfig):
	name = 'score'
	verbose_name = 'Error analysis'
