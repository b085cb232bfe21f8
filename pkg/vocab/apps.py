# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from django.apps import AppConfig


class VocabConfig(AppConfig):
	name = 'vocab'
	verbose_name = 'Vocabularies'
