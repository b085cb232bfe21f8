# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from cli.commands import CodeSwitchCommand, corpus_resources, add_resource_arguments
from common_utils.json_utils import write_json
from data.manifest import read_manifest
from decode.pipeline import read_hypotheses
from score.report import score_corpus, render_table


def score_hypotheses(refs, path, vocab, pinyin_table):
	hyps = dict((hyp.utt_id, hyp.tokens) for hyp in read_hypotheses(path))
	return score_corpus(refs, hyps, vocab=vocab, pinyin_table=pinyin_table)


class Command(CodeSwitchCommand):
	help = "Score a hypothesis file against a reference manifest"
	uses_config = False

	def add_arguments(self, parser):
		super(Command, self).add_arguments(parser)
		parser.add_argument('--ref', required=True, help="reference manifest")
		parser.add_argument('--hyp', required=True, help="hypothesis JSON-lines file")
		parser.add_argument('--system', default='system', help="row label in the table")
		parser.add_argument('--out', help="write the full report as JSON")
		add_resource_arguments(parser)

	def run(self, **options):
		refs = read_manifest(options['ref'], check_files=False).tokens()
		vocab, pinyin_table = corpus_resources(options['ref'], options.get('char_vocab'), options.get('pinyin_table'))
		report = score_hypotheses(refs, options['hyp'], vocab, pinyin_table)
		self.stdout.write(render_table([(options['system'], report)]))
		if report.per is not None:
			self.stdout.write("PER %.2f%%" % (100.0 * report.per))
		if options.get('out'):
			write_json(options['out'], report.to_dict())
