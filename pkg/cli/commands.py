# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import os

from django.core.management.base import BaseCommand, CommandError

from .forms import load_run_config
from common_utils import logger
from common_utils.exceptions import CodeSwitchError
from data.corpus import CHAR_VOCAB_FILE, PINYIN_TABLE_FILE
from vocab.pinyin import PinyinTable
from vocab.vocabulary import Vocabulary


EXIT_IO = 1


class CodeSwitchCommand(BaseCommand):
	"""
	Spoločný základ príkazov. Chyby projektu sa prekladajú na CommandError
	s návratovým kódom podľa `exit_code`.
	"""

	uses_config = True

	def add_arguments(self, parser):
		if self.uses_config:
			parser.add_argument('--config', help="JSON run configuration")
			parser.add_argument('--seed', type=int, help="overrides data, model and training seeds")

	def load_config(self, options, overrides=None):
		return load_run_config(options.get('config'), seed=options.get('seed'), overrides=overrides)

	def run(self, **options):
		raise NotImplementedError()

	def handle(self, *args, **options):
		try:
			self.run(**options)
		except CodeSwitchError as e:
			logger.error("%s", e)
			raise CommandError(str(e), returncode=e.exit_code)
		except OSError as e:
			logger.error("%s", e)
			raise CommandError(str(e), returncode=EXIT_IO)


def default_resource(explicit, manifest_path, name):
	if explicit:
		return explicit
	candidate = os.path.join(os.path.dirname(os.path.abspath(manifest_path)), name)
	return candidate if os.path.isfile(candidate) else None


def corpus_resources(manifest_path, char_vocab_path=None, pinyin_table_path=None):
	"""
	Slovník znakov a pinyinová tabuľka; bez explicitnej cesty sa hľadajú
	vedľa manifestu.
	"""
	char_vocab_path = default_resource(char_vocab_path, manifest_path, CHAR_VOCAB_FILE)
	pinyin_table_path = default_resource(pinyin_table_path, manifest_path, PINYIN_TABLE_FILE)
	char_vocab = Vocabulary.load(char_vocab_path) if char_vocab_path else None
	pinyin_table = PinyinTable.load(pinyin_table_path) if pinyin_table_path else None
	return char_vocab, pinyin_table


def add_resource_arguments(parser):
	parser.add_argument('--char-vocab', dest='char_vocab', help="character vocabulary (default next to the manifest)")
	parser.add_argument('--pinyin-table', dest='pinyin_table', help="pinyin table (default next to the manifest)")
