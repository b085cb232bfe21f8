# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import os

from .score import score_hypotheses
from cli.commands import CodeSwitchCommand, corpus_resources, add_resource_arguments
from common_utils.json_utils import dumps, write_json
from data.manifest import read_manifest
from score.report import render_table, COLUMNS
from score.significance import compare_reports


def format_p(value):
	return 'n/a' if value is None else '%.4g' % value


class Command(CodeSwitchCommand):
	help = "Compare two systems: column deltas, paired t-test and McNemar test"
	uses_config = False

	def add_arguments(self, parser):
		super(Command, self).add_arguments(parser)
		parser.add_argument('hyp_a', help="baseline hypotheses")
		parser.add_argument('hyp_b', help="compared hypotheses")
		parser.add_argument('--ref', required=True, help="reference manifest")
		parser.add_argument('--out', help="write the comparison as JSON")
		add_resource_arguments(parser)

	def run(self, **options):
		refs = read_manifest(options['ref'], check_files=False).tokens()
		vocab, pinyin_table = corpus_resources(options['ref'], options.get('char_vocab'), options.get('pinyin_table'))
		report_a = score_hypotheses(refs, options['hyp_a'], vocab, pinyin_table)
		report_b = score_hypotheses(refs, options['hyp_b'], vocab, pinyin_table)
		result = compare_reports(report_a, report_b)
		name_a = os.path.basename(options['hyp_a'])
		name_b = os.path.basename(options['hyp_b'])
		self.stdout.write(render_table([(name_a, report_a), (name_b, report_b)]))
		for key, entry in result['columns'].items():
			self.stdout.write("%-18s delta %+.2f  t-test p %s" % (COLUMNS[key], entry['delta'], format_p(entry['ttest_p'])))
		self.stdout.write("McNemar p %s over %d utterances" % (format_p(result['mcnemar_p']), result['utterances']))
		if options.get('out'):
			write_json(options['out'], result)
		else:
			self.stdout.write(dumps(result))
