# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import os

from cli.commands import CodeSwitchCommand
from cli.forms import SELECT_MODES
from cli.training import Trainer, EpochResult, manifest_items, embedding_smoothing
from common_utils import ensure_dir
from common_utils.asciitable import NamedtupleTablePrinter
from common_utils.exceptions import ConfigError
from common_utils.json_utils import write_json
from data.corpus import manifest_path, CHAR_VOCAB_FILE, PINYIN_VOCAB_FILE, PINYIN_TABLE_FILE, TRAIN_TEXT_FILE
from data.manifest import read_manifest
from loss.objectives import SMOOTHING_EMBEDDING
from model.networks import ModelBundle, ARCHITECTURES
from vocab.pinyin import PinyinTable
from vocab.vocabulary import Vocabulary


RUN_CONFIG_FILE = 'config.json'


class Command(CodeSwitchCommand):
	help = "Train a model on a generated corpus"

	def add_arguments(self, parser):
		super(Command, self).add_arguments(parser)
		parser.add_argument('--architecture', choices=ARCHITECTURES, help="overrides model.architecture")
		parser.add_argument('--epochs', type=int, help="overrides optim.epochs")
		parser.add_argument('--select', choices=SELECT_MODES, help="overrides optim.select")
		parser.add_argument('--limit', type=int, help="use only the first N training utterances")
		parser.add_argument('--data', help="corpus directory (default paths.data_dir)")
		parser.add_argument('--out', help="experiment directory (default paths.exp_dir/<architecture>)")

	def run(self, **options):
		overrides = {}
		if options.get('architecture'):
			overrides['model'] = {'architecture': options['architecture']}
		if options.get('epochs'):
			overrides.setdefault('optim', {})['epochs'] = options['epochs']
		if options.get('select'):
			overrides.setdefault('optim', {})['select'] = options['select']
		config = self.load_config(options, overrides)
		architecture = config['model']['architecture']
		data_dir = options.get('data') or config.paths['data_dir']
		out_dir = options.get('out') or os.path.join(config.paths['exp_dir'], architecture)

		char_vocab = Vocabulary.load(os.path.join(data_dir, CHAR_VOCAB_FILE))
		pinyin_vocab = Vocabulary.load(os.path.join(data_dir, PINYIN_VOCAB_FILE))
		pinyin_table = PinyinTable.load(os.path.join(data_dir, PINYIN_TABLE_FILE))
		train_items = manifest_items(read_manifest(manifest_path(data_dir, 'train')), options.get('limit'))
		val_items = manifest_items(read_manifest(manifest_path(data_dir, 'val')))
		if not train_items or not val_items:
			raise ConfigError("training needs non-empty train and val manifests in %s" % data_dir)

		bundle = ModelBundle(config.model(input_dim=train_items[0].features.shape[1]), char_vocab, pinyin_vocab)
		smooth = None
		if config.loss.smoothing == SMOOTHING_EMBEDDING:
			smooth = embedding_smoothing(config['smoothing'], config.smoothing, char_vocab, os.path.join(data_dir, TRAIN_TEXT_FILE))

		ensure_dir(out_dir)
		write_json(os.path.join(out_dir, RUN_CONFIG_FILE), config.to_dict())
		trainer = Trainer(
			bundle,
			config.loss,
			config.optim,
			config.decode(architecture),
			out_dir,
			smooth=smooth,
			augment_cfg=config.augment,
			pinyin_table=pinyin_table,
			workers=config['decode']['workers'],
		)
		results = trainer.fit(train_items, val_items)
		self.stdout.write(NamedtupleTablePrinter(results, EpochResult, columns=['epoch', 'train_loss', 'val_loss', 'val_accuracy', 'val_ter']).render())
		self.stdout.write("checkpoints written to %s" % out_dir)
