# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import os

from cli.commands import CodeSwitchCommand, corpus_resources, add_resource_arguments
from common_utils import logger
from common_utils.exceptions import CompatibilityError, ConfigError
from data.manifest import read_manifest
from decode.pipeline import decode_corpus, sweep_thresholds, measure_rtf, write_hypotheses
from model.checkpoint import load_checkpoint
from model.networks import ARCHITECTURES
from score.report import score_corpus


def parse_thresholds(value):
	try:
		thresholds = [float(part) for part in value.split(',') if part.strip()]
	except ValueError:
		raise ConfigError("--sweep expects comma separated thresholds, got %r" % value, {'sweep': ["not a number list"]})
	if not thresholds:
		raise ConfigError("--sweep needs at least one threshold", {'sweep': ["empty"]})
	return thresholds


def sweep_path(out, p_thres):
	root, ext = os.path.splitext(out)
	return '%s.p%g%s' % (root, p_thres, ext or '.jsonl')


def check_inputs(bundle, items, char_vocab):
	if char_vocab is not None and char_vocab != bundle.char_vocab:
		raise CompatibilityError("corpus character vocabulary does not match the model (%d vs %d tokens)" % (len(char_vocab), len(bundle.char_vocab)))
	input_dim = bundle.config.encoder.input_dim
	for utt_id, features in items:
		if features.shape[1] != input_dim:
			raise CompatibilityError("%s has %d-dimensional features, model expects %d" % (utt_id, features.shape[1], input_dim))


class Command(CodeSwitchCommand):
	help = "Decode a manifest with a trained checkpoint"

	def add_arguments(self, parser):
		super(Command, self).add_arguments(parser)
		parser.add_argument('--checkpoint', required=True)
		parser.add_argument('--manifest', required=True)
		parser.add_argument('--out', required=True, help="hypothesis JSON-lines file")
		parser.add_argument('--mode', choices=ARCHITECTURES, help="decoding mode (default: the model architecture)")
		parser.add_argument('--sweep', help="comma separated list of P_thres values")
		parser.add_argument('--workers', type=int, help="overrides decode.workers")
		add_resource_arguments(parser)

	def report(self, label, hypotheses, refs):
		rtf = measure_rtf(hypotheses)
		report = score_corpus(refs, dict((hyp.utt_id, hyp.tokens) for hyp in hypotheses))
		self.stdout.write("%s: %d utterances, TER %.2f%%, RTF %.4f" % (label, len(hypotheses), 100.0 * report.ter, rtf))

	def run(self, **options):
		config = self.load_config(options)
		bundle = load_checkpoint(options['checkpoint'])
		manifest = read_manifest(options['manifest'])
		char_vocab, __ = corpus_resources(options['manifest'], options.get('char_vocab'), options.get('pinyin_table'))
		items = list(manifest.items())
		check_inputs(bundle, items, char_vocab)
		cfg = config.decode(options.get('mode') or bundle.architecture)
		workers = options.get('workers') or config['decode']['workers']
		refs = manifest.tokens()
		if options.get('sweep'):
			results = sweep_thresholds(items, bundle, cfg, parse_thresholds(options['sweep']), workers=workers)
			for p_thres, hypotheses in results.items():
				path = sweep_path(options['out'], p_thres)
				write_hypotheses(path, hypotheses)
				logger.info("wrote %s", path)
				self.report("P_thres %g" % p_thres, hypotheses, refs)
			return
		hypotheses = decode_corpus(items, bundle, cfg, workers=workers)
		write_hypotheses(options['out'], hypotheses)
		self.report(cfg.architecture, hypotheses, refs)
