# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from django.apps import AppConfig


class CliConfig(AppConfig):
	name = 'cli'
	verbose_name = 'Command line'
