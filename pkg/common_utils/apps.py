# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from django.apps import AppConfig as CoreAppConfig


class AppConfig(CoreAppConfig):
	name = 'common_utils'
	verbose_name = 'Utility'
