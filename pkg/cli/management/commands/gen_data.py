# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from collections import OrderedDict

from cli.commands import CodeSwitchCommand
from common_utils.asciitable import DictTablePrinter
from data.corpus import gen_corpus
from vocab.vocabulary import composition


class Command(CodeSwitchCommand):
	help = "Generate the synthetic code-switching corpus"

	def add_arguments(self, parser):
		super(Command, self).add_arguments(parser)
		parser.add_argument('--out', help="output directory (default paths.data_dir)")

	def run(self, **options):
		config = self.load_config(options)
		out_dir = options.get('out') or config.paths['data_dir']
		corpus = gen_corpus(config.synth, out_dir)
		summary = OrderedDict()
		for split, manifest in corpus.manifests.items():
			summary['%s utterances' % split] = len(manifest)
		summary['characters'] = len(corpus.pinyin_table)
		summary['pinyin units'] = len(corpus.pinyin_table.homophones())
		summary['english words'] = len(corpus.inventory.eng_words)
		if len(corpus.manifests['train']):
			for key, value in composition(corpus.manifests['train'].tokens().values()).items():
				summary['train %s' % key.replace('_', '-')] = '%.3f' % value
		self.stdout.write(DictTablePrinter(summary).render())
		self.stdout.write("corpus written to %s" % out_dir)
