# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io

import numpy as np
from django.test import SimpleTestCase

from .exceptions import DecodeError, HypothesisFormatError
from .greedy import ctc_greedy, mask_by_threshold
from .pipeline import DecodeConfig, Hypothesis, decode_pipeline, decode_corpus, sweep_thresholds, measure_rtf, write_hypotheses, read_hypotheses
from .refine import iteration_schedule, cmlm_refine
from common_utils.exceptions import ConfigError
from common_utils.tests_common import TemporaryDirectoryMixin
from loss.masking import MaskedSequence, apply_mask
from model.networks import EncoderConfig, ModelConfig, ModelBundle, CTC_ONLY, MASK_CTC, MASK_CTC_P2M, MASK_CTC_M2M
from tensor.primitives import log_softmax
from vocab.pinyin import PinyinTable
from vocab.vocabulary import build_vocab


TABLE = PinyinTable([("我", "wo"), ("很", "hen"), ("狠", "hen"), ("好", "hao")])
CORPUS = ["我很happy", "狠好 day"]
CHAR_VOCAB, PINYIN_VOCAB = build_vocab(CORPUS, TABLE)


def tiny_bundle(architecture=MASK_CTC):
	encoder = EncoderConfig(input_dim=3, model_dim=8, num_layers=1, num_heads=2, ff_dim=16, subsample_factor=4, dropout=0.0)
	return ModelBundle(ModelConfig(architecture, encoder, num_cmlm_layers=1, seed=3), CHAR_VOCAB, PINYIN_VOCAB)


def frame_posteriors(frame_tokens, vocab_size, confidence):
	"""
	Log-pravdepodobnosti rámcov s daným argmaxom a istotou.
	"""
	rows = np.full((len(frame_tokens), vocab_size), (1.0 - confidence) / (vocab_size - 1))
	for idx, token in enumerate(frame_tokens):
		rows[idx, token] = confidence
	return np.log(rows)


class StubBundle(object):
	"""
	Model s pevným výstupom enkodéra a náhodnými (alebo delegovanými)
	výstupmi dekodérov.
	"""

	def __init__(self, log_probs, architecture=MASK_CTC, rng=None, delegate=None, hidden=None):
		self.log_probs = log_probs
		self.architecture = architecture
		self.char_vocab = CHAR_VOCAB
		self.ctc_vocab = PINYIN_VOCAB if architecture == MASK_CTC_P2M else CHAR_VOCAB
		self.p2m = object() if architecture in (MASK_CTC_P2M, MASK_CTC_M2M) else None
		self.rng = rng if rng is not None else np.random.default_rng(0)
		self.delegate = delegate
		self.hidden = hidden
		self.cmlm_inputs = []

	def encoder_forward(self, features):
		return self.hidden, self.log_probs

	def random_logits(self, masked):
		return self.rng.normal(size=(len(masked), len(self.char_vocab)))

	def p2m_forward(self, masked, hidden):
		return self.random_logits(masked)

	def cmlm_forward(self, masked, hidden):
		self.cmlm_inputs.append(list(masked.ids))
		if self.delegate is not None:
			return self.delegate.cmlm_forward(masked, hidden)
		return self.random_logits(masked)


class GreedyTest(SimpleTestCase):
	def test_collapse(self):
		a, b, blank = 4, 5, 0
		tokens, __ = ctc_greedy(frame_posteriors([a, a, blank, b], 10, 0.8), blank)
		self.assertEqual(tokens, [a, b])

	def test_blank_separates(self):
		tokens, __ = ctc_greedy(frame_posteriors([4, 0, 4], 10, 0.8), 0)
		self.assertEqual(tokens, [4, 4])

	def test_all_blank(self):
		self.assertEqual(ctc_greedy(frame_posteriors([0, 0, 0], 10, 0.9), 0), ([], []))

	def test_confidence_is_max_over_merged(self):
		log_probs = np.log(np.array([
			[0.2, 0.6, 0.2],
			[0.1, 0.8, 0.1],
			[0.7, 0.2, 0.1],
			[0.3, 0.1, 0.6],
		]))
		tokens, confidences = ctc_greedy(log_probs, 0)
		self.assertEqual(tokens, [1, 2])
		self.assertAlmostEqual(confidences[0], 0.8)
		self.assertAlmostEqual(confidences[1], 0.6)

	def test_excluded_symbols(self):
		tokens, confidences = ctc_greedy(frame_posteriors([2, 2, 0, 5], 10, 0.8), 0, excluded=(0, 1, 2, 3))
		self.assertEqual(tokens, [5])
		self.assertAlmostEqual(confidences[0], 0.8)


class ThresholdTest(SimpleTestCase):
	def test_masks_low_confidence(self):
		masked = mask_by_threshold([4, 5, 6], [0.9, 0.3, 0.99], 0.5, CHAR_VOCAB.mask)
		self.assertEqual(masked.mask_positions, [1])
		self.assertEqual(masked.ids, [4, CHAR_VOCAB.mask, 6])

	def test_tiny_threshold(self):
		self.assertEqual(mask_by_threshold([4, 5], [0.01, 0.2], 1e-12, CHAR_VOCAB.mask).mask_positions, [])

	def test_threshold_one(self):
		self.assertEqual(mask_by_threshold([4, 5, 6], [1.0, 0.999, 0.5], 1.0, CHAR_VOCAB.mask).mask_positions, [1, 2])

	def test_emitted_mask_is_masked(self):
		masked = mask_by_threshold([4, CHAR_VOCAB.mask, 6], [0.9, 0.999, 0.2], 0.5, CHAR_VOCAB.mask)
		self.assertEqual(masked.mask_positions, [1, 2])


class ScheduleTest(SimpleTestCase):
	def test_examples(self):
		self.assertEqual(iteration_schedule(5, 2), [2, 3])
		self.assertEqual(iteration_schedule(4, 1), [4])
		self.assertEqual(iteration_schedule(0, 3), [])

	def test_sums(self):
		for n in range(51):
			for k in range(1, 11):
				schedule = iteration_schedule(n, k)
				self.assertEqual(sum(schedule), n)
				if n:
					self.assertEqual(len(schedule), k)


class RefineTest(SimpleTestCase):
	def setUp(self):
		self.bundle = tiny_bundle()
		self.hidden, __ = self.bundle.encoder_forward(np.random.default_rng(1).normal(size=(24, 3)))

	def test_no_masks(self):
		stub = StubBundle(None)
		ids, filled, history = cmlm_refine(stub, MaskedSequence([4, 5, 6], [], CHAR_VOCAB.mask), None, 3)
		self.assertEqual(ids, [4, 5, 6])
		self.assertEqual(filled, {})
		self.assertEqual(history, [])
		self.assertEqual(stub.cmlm_inputs, [])

	def test_single_mask(self):
		stub = StubBundle(None, delegate=self.bundle)
		masked = apply_mask([4, 5, 6], [1], CHAR_VOCAB.mask)
		ids, filled, __ = cmlm_refine(stub, masked, self.hidden, 1)
		self.assertEqual(len(stub.cmlm_inputs), 1)
		logits = self.bundle.cmlm_forward(masked, self.hidden).values[1]
		logits[[CHAR_VOCAB.mask, CHAR_VOCAB.blank]] = -np.inf
		self.assertEqual(ids[1], int(np.argmax(logits)))
		self.assertEqual(ids[0], 4)
		self.assertEqual(ids[2], 6)
		self.assertTrue(0.0 <= filled[1] <= 1.0)

	def test_monotone_commitment(self):
		stub = StubBundle(None, delegate=self.bundle)
		masked = apply_mask([4, 5, 6, 7, 8, 9, 4], [0, 2, 3, 5, 6], CHAR_VOCAB.mask)
		ids, __, history = cmlm_refine(stub, masked, self.hidden, 5)
		self.assertEqual([len(step) for step in history], [1, 1, 1, 1, 1])
		self.assertEqual(sorted(sum(history, [])), [0, 2, 3, 5, 6])
		inputs = stub.cmlm_inputs + [ids]
		for earlier, later in zip(inputs, inputs[1:]):
			for pos, token in enumerate(earlier):
				if token != CHAR_VOCAB.mask:
					self.assertEqual(later[pos], token)
		self.assertNotIn(CHAR_VOCAB.mask, ids)

	def test_masked_id_never_chosen(self):
		stub = StubBundle(None)
		stub.random_logits = lambda masked: np.tile(np.eye(len(CHAR_VOCAB))[CHAR_VOCAB.mask] * 100.0, (len(masked), 1))
		ids, __, __ = cmlm_refine(stub, apply_mask([4, 5], [0, 1], CHAR_VOCAB.mask), None, 2)
		self.assertNotIn(CHAR_VOCAB.mask, ids)
		self.assertNotIn(CHAR_VOCAB.blank, ids)


class PipelineContractTest(SimpleTestCase):
	def test_length_and_vocabulary(self):
		rng = np.random.default_rng(7)
		forbidden = {CHAR_VOCAB[CHAR_VOCAB.mask], CHAR_VOCAB[CHAR_VOCAB.blank]}
		for __ in range(1000):
			frames = int(rng.integers(1, 15))
			log_probs = log_softmax(rng.normal(scale=3.0, size=(frames, len(CHAR_VOCAB))))
			greedy, __ = ctc_greedy(log_probs, CHAR_VOCAB.blank)
			cfg = DecodeConfig(p_thres=float(rng.uniform(0.05, 1.0)), iterations=int(rng.integers(1, 5)))
			hyp = decode_pipeline(np.zeros((frames, 3)), StubBundle(log_probs, rng=rng), cfg)
			self.assertEqual(len(hyp.tokens), len(greedy))
			self.assertFalse(forbidden & set(hyp.tokens))

	def test_intermediate_length(self):
		rng = np.random.default_rng(8)
		for mask_source in ('ctc', 'p2m'):
			for __ in range(100):
				frames = int(rng.integers(1, 12))
				log_probs = log_softmax(rng.normal(scale=3.0, size=(frames, len(PINYIN_VOCAB))))
				greedy, __ = ctc_greedy(log_probs, PINYIN_VOCAB.blank)
				cfg = DecodeConfig(p_thres=0.6, iterations=2, architecture=MASK_CTC_P2M, mask_source=mask_source)
				hyp = decode_pipeline(np.zeros((frames, 3)), StubBundle(log_probs, MASK_CTC_P2M, rng=rng), cfg)
				self.assertEqual(len(hyp.tokens), len(greedy))
				self.assertNotIn('<mask>', hyp.tokens)

	def test_tiny_threshold_keeps_greedy(self):
		frames = [4, 4, 0, 9, 0, 6]
		stub = StubBundle(frame_posteriors(frames, len(CHAR_VOCAB), 0.4))
		hyp = decode_pipeline(np.zeros((6, 3)), stub, DecodeConfig(p_thres=1e-9))
		self.assertEqual(hyp.tokens, CHAR_VOCAB.decode([4, 9, 6]))
		self.assertEqual(hyp.masked_positions, [])
		self.assertEqual(stub.cmlm_inputs, [])

	def test_ctc_only_raw(self):
		stub = StubBundle(frame_posteriors([5, 0, 8], len(CHAR_VOCAB), 0.3), CTC_ONLY)
		hyp = decode_pipeline(np.zeros((3, 3)), stub, DecodeConfig(architecture=CTC_ONLY))
		self.assertEqual(hyp.tokens, CHAR_VOCAB.decode([5, 8]))
		for confidence in hyp.confidences:
			self.assertAlmostEqual(confidence, 0.3)

	def test_architecture_mismatch(self):
		stub = StubBundle(frame_posteriors([5], len(CHAR_VOCAB), 0.9))
		with self.assertRaises(DecodeError):
			decode_pipeline(np.zeros((1, 3)), stub, DecodeConfig(architecture=MASK_CTC_P2M))

	def test_audio_duration(self):
		stub = StubBundle(frame_posteriors([5], len(CHAR_VOCAB), 0.9))
		hyp = decode_pipeline(np.zeros((37, 3)), stub, DecodeConfig())
		self.assertEqual(hyp.audio_ms, 370.0)
		self.assertGreaterEqual(hyp.decode_ms, 0.0)


class RealModelTest(TemporaryDirectoryMixin, SimpleTestCase):
	def items(self, count=3):
		rng = np.random.default_rng(11)
		return [('utt%d' % idx, rng.normal(size=(int(rng.integers(8, 30)), 3))) for idx in range(count)]

	def test_deterministic(self):
		bundle = tiny_bundle()
		cfg = DecodeConfig(p_thres=0.999, iterations=2)
		first = decode_corpus(self.items(), bundle, cfg)
		second = decode_corpus(self.items(), bundle, cfg, workers=2)
		self.assertEqual([hyp.tokens for hyp in first], [hyp.tokens for hyp in second])
		self.assertEqual([hyp.utt_id for hyp in first], ['utt0', 'utt1', 'utt2'])

	def test_all_architectures(self):
		for architecture in (CTC_ONLY, MASK_CTC, MASK_CTC_P2M, MASK_CTC_M2M):
			bundle = tiny_bundle(architecture)
			for mask_source in ('ctc', 'p2m'):
				cfg = DecodeConfig(p_thres=0.999, iterations=3, architecture=architecture, mask_source=mask_source)
				for hyp in decode_corpus(self.items(2), bundle, cfg):
					for token in hyp.tokens:
						self.assertIn(token, CHAR_VOCAB)
						self.assertNotIn(token, ('<mask>', '<blank>'))

	def test_emitted_mask_never_in_output(self):
		cases = [(CTC_ONLY, 'ctc'), (MASK_CTC, 'ctc'), (MASK_CTC_P2M, 'ctc'), (MASK_CTC_P2M, 'p2m')]
		for architecture, mask_source in cases:
			bundle = tiny_bundle(architecture)
			bundle.encoder.ctc.bias.values[bundle.ctc_vocab.mask] += 50.0
			cfg = DecodeConfig(p_thres=0.99, iterations=2, architecture=architecture, mask_source=mask_source)
			for hyp in decode_corpus(self.items(2), bundle, cfg):
				self.assertNotIn('<mask>', hyp.tokens)
				if architecture == MASK_CTC:
					self.assertEqual(hyp.masked_positions, [0])
					self.assertEqual(len(hyp.tokens), 1)

	def test_ctc_only_on_intermediate_model(self):
		hyps = decode_corpus(self.items(2), tiny_bundle(MASK_CTC_P2M), DecodeConfig(architecture=CTC_ONLY))
		for hyp in hyps:
			for token in hyp.tokens:
				self.assertIn(token, CHAR_VOCAB)

	def test_sweep(self):
		results = sweep_thresholds(self.items(2), tiny_bundle(), DecodeConfig(), [0.5, 0.99])
		self.assertEqual(list(results), [0.5, 0.99])
		low = sum(len(hyp.masked_positions) for hyp in results[0.5])
		high = sum(len(hyp.masked_positions) for hyp in results[0.99])
		self.assertLessEqual(low, high)

	def test_iterations_cost_time(self):
		bundle = tiny_bundle()
		hidden, __ = bundle.encoder_forward(np.random.default_rng(2).normal(size=(40, 3)))
		frames = []
		for token in [4, 5, 6, 7, 8, 9, 4, 5, 6, 7, 8, 9]:
			frames.extend([token, 0])
		log_probs = frame_posteriors(frames, len(CHAR_VOCAB), 0.5)
		stub = StubBundle(log_probs, delegate=bundle, hidden=hidden)
		items = [('utt%d' % idx, np.zeros((24, 3))) for idx in range(3)]
		single = measure_rtf(decode_corpus(items, stub, DecodeConfig(iterations=1)))
		iterative = measure_rtf(decode_corpus(items, stub, DecodeConfig(iterations=10)))
		self.assertLess(single, iterative)

	def test_hypothesis_file(self):
		hyps = decode_corpus(self.items(2), tiny_bundle(), DecodeConfig())
		path = self.tmp_path('hyp.jsonl')
		write_hypotheses(path, hyps)
		loaded = read_hypotheses(path)
		self.assertEqual([hyp.to_dict() for hyp in loaded], [hyp.to_dict() for hyp in hyps])

	def test_malformed_file(self):
		path = self.tmp_path('hyp.jsonl')
		with io.open(path, 'w', encoding='utf-8') as fp:
			fp.write('{"utt_id": "a"}\n')
		with self.assertRaises(HypothesisFormatError) as ctx:
			read_hypotheses(path)
		self.assertEqual(ctx.exception.lineno, 1)


class RtfTest(SimpleTestCase):
	def test_table_value(self):
		self.assertAlmostEqual(measure_rtf([Hypothesis([], [], decode_ms=1000.0, audio_ms=50000.0)]), 0.02)

	def test_zero_decode_time(self):
		self.assertEqual(measure_rtf([Hypothesis([], [], decode_ms=0.0, audio_ms=500.0)]), 0.0)

	def test_ratio_of_sums(self):
		hyps = [Hypothesis([], [], decode_ms=100.0, audio_ms=1000.0), Hypothesis([], [], decode_ms=300.0, audio_ms=2000.0)]
		self.assertAlmostEqual(measure_rtf(hyps), 400.0 / 3000.0)

	def test_zero_audio(self):
		with self.assertRaises(DecodeError):
			measure_rtf([Hypothesis([], [], decode_ms=1.0, audio_ms=0.0)])


class DecodeConfigTest(SimpleTestCase):
	def test_validation(self):
		with self.assertRaises(ConfigError):
			DecodeConfig(p_thres=0.0)
		with self.assertRaises(ConfigError):
			DecodeConfig(iterations=0)
		with self.assertRaises(ConfigError):
			DecodeConfig(mask_source='cmlm')

	def test_defaults(self):
		cfg = DecodeConfig()
		self.assertEqual(cfg.p_thres, 0.99)
		self.assertEqual(cfg.iterations, 1)
