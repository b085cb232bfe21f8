# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from django.apps import AppConfig


class EmbedConfig(AppConfig):
	name = 'embed'
	verbose_name = 'Word embeddings'
