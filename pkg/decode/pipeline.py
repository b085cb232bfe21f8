# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import time
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .exceptions import DecodeError, HypothesisFormatError
from .greedy import ctc_greedy, low_confidence_positions, mask_by_threshold
from .refine import cmlm_refine, restricted_posteriors
from common_utils import logger
from common_utils.exceptions import ConfigError
from common_utils.json_utils import write_json_lines, read_json_lines
from loss.masking import MaskedSequence, apply_mask
from model.networks import ARCHITECTURES, CTC_ONLY, MASK_CTC, INTERMEDIATE_ARCHITECTURES
from vocab.vocabulary import detokenize


FRAME_SHIFT_MS = 10.0

MASK_SOURCE_CTC = 'ctc'
MASK_SOURCE_P2M = 'p2m'
MASK_SOURCES = (MASK_SOURCE_CTC, MASK_SOURCE_P2M)


class DecodeConfig(object):
	def __init__(self, p_thres=0.99, iterations=1, architecture=MASK_CTC, mask_source=MASK_SOURCE_CTC):
		if not 0.0 < p_thres <= 1.0:
			raise ConfigError("p_thres must be in (0, 1], got %r" % p_thres)
		if iterations < 1:
			raise ConfigError("iterations must be at least 1, got %r" % iterations)
		if architecture not in ARCHITECTURES:
			raise ConfigError("unknown architecture %r" % architecture)
		if mask_source not in MASK_SOURCES:
			raise ConfigError("unknown mask source %r" % mask_source)
		self.p_thres = float(p_thres)
		self.iterations = int(iterations)
		self.architecture = architecture
		self.mask_source = mask_source

	def to_dict(self):
		return {
			'p_thres': self.p_thres,
			'iterations': self.iterations,
			'architecture': self.architecture,
			'mask_source': self.mask_source,
		}

	def with_threshold(self, p_thres):
		return DecodeConfig(p_thres, self.iterations, self.architecture, self.mask_source)


class Hypothesis(object):
	def __init__(self, tokens, confidences, masked_positions=(), history=(), decode_ms=0.0, audio_ms=0.0, utt_id=None, text=None):
		self.tokens = list(tokens)
		self.confidences = [float(value) for value in confidences]
		self.masked_positions = list(masked_positions)
		self.history = [list(step) for step in history]
		self.decode_ms = float(decode_ms)
		self.audio_ms = float(audio_ms)
		self.utt_id = utt_id
		self.text = text if text is not None else detokenize(self.tokens)

	def __repr__(self):
		return '<Hypothesis %s %r>' % (self.utt_id, self.text)

	def token_ids(self, vocab):
		return vocab.encode(self.tokens)

	def to_dict(self):
		return OrderedDict([
			('utt_id', self.utt_id),
			('text', self.text),
			('tokens', self.tokens),
			('confidences', self.confidences),
			('masked_positions', self.masked_positions),
			('decode_ms', self.decode_ms),
			('audio_ms', self.audio_ms),
		])

	@classmethod
	def from_dict(cls, data):
		return cls(
			data['tokens'],
			data['confidences'],
			masked_positions=data.get('masked_positions', []),
			decode_ms=data['decode_ms'],
			audio_ms=data['audio_ms'],
			utt_id=data['utt_id'],
			text=data.get('text'),
		)


def check_compatibility(bundle, cfg):
	if cfg.architecture == CTC_ONLY:
		return
	if cfg.architecture != bundle.architecture:
		raise DecodeError("cannot decode %s with a %s model" % (cfg.architecture, bundle.architecture))


def argmax_fill(bundle, logits, positions):
	vocab = bundle.char_vocab
	probs = restricted_posteriors(logits, (vocab.mask, vocab.blank))
	best = np.argmax(probs, axis=-1)
	return dict((pos, int(best[pos])) for pos in positions), dict((pos, float(probs[pos, best[pos]])) for pos in positions)


def intermediate_stage(bundle, cfg, tokens, confidences, hidden):
	"""
	Preklad výstupu CTC do znakov cez P2M (alebo M2M) dekodér. Vráti
	maskovanú postupnosť nad znakovým slovníkom a istoty.
	"""
	char_mask = bundle.char_vocab.mask
	length = len(tokens)
	if cfg.mask_source == MASK_SOURCE_CTC:
		masked = mask_by_threshold(tokens, confidences, cfg.p_thres, bundle.ctc_vocab.mask)
		logits = bundle.p2m_forward(masked, hidden)
		observed = masked.observed_positions
		assignments, __ = argmax_fill(bundle, logits, observed)
		ids = [char_mask] * length
		for pos, token in assignments.items():
			ids[pos] = token
		return MaskedSequence(ids, masked.mask_positions, char_mask), confidences
	logits = bundle.p2m_forward(MaskedSequence(tokens, [], bundle.ctc_vocab.mask), hidden)
	assignments, scores = argmax_fill(bundle, logits, range(length))
	char_confidences = [scores[pos] for pos in range(length)]
	ids = [assignments[pos] for pos in range(length)]
	return apply_mask(ids, low_confidence_positions(char_confidences, cfg.p_thres), char_mask), char_confidences


def decode_pipeline(features, bundle, cfg, utt_id=None):
	check_compatibility(bundle, cfg)
	started = time.perf_counter()
	hidden, log_probs = bundle.encoder_forward(features)
	# without a CMLM pass nothing could replace an emitted special symbol
	excluded = bundle.ctc_vocab.special_ids if cfg.architecture == CTC_ONLY else ()
	tokens, confidences = ctc_greedy(log_probs, bundle.ctc_vocab.blank, excluded)
	masked_positions = []
	history = []
	if cfg.architecture == CTC_ONLY:
		if bundle.p2m is not None and tokens:
			logits = bundle.p2m_forward(MaskedSequence(tokens, [], bundle.ctc_vocab.mask), hidden)
			assignments, __ = argmax_fill(bundle, logits, range(len(tokens)))
			tokens = [assignments[pos] for pos in range(len(tokens))]
		ids = tokens
	else:
		if cfg.architecture in INTERMEDIATE_ARCHITECTURES:
			masked, confidences = intermediate_stage(bundle, cfg, tokens, confidences, hidden)
		else:
			masked = mask_by_threshold(tokens, confidences, cfg.p_thres, bundle.char_vocab.mask)
		masked_positions = list(masked.mask_positions)
		ids, filled, history = cmlm_refine(bundle, masked, hidden, cfg.iterations)
		confidences = list(confidences)
		for pos, score in filled.items():
			confidences[pos] = score
	elapsed = time.perf_counter() - started
	frames = np.asarray(features).shape[0]
	return Hypothesis(
		bundle.char_vocab.decode(ids),
		confidences,
		masked_positions=masked_positions,
		history=history,
		decode_ms=elapsed * 1000.0,
		audio_ms=frames * FRAME_SHIFT_MS,
		utt_id=utt_id,
	)


def decode_corpus(items, bundle, cfg, workers=1):
	"""
	Dekóduje dvojice (utt_id, príznaky). Poradie výstupu zodpovedá vstupu.
	"""
	check_compatibility(bundle, cfg)
	items = list(items)
	if workers <= 1:
		return [decode_pipeline(feats, bundle, cfg, utt_id) for utt_id, feats in items]
	with ThreadPoolExecutor(max_workers=workers) as pool:
		return list(pool.map(lambda item: decode_pipeline(item[1], bundle, cfg, item[0]), items))


def sweep_thresholds(items, bundle, cfg, thresholds, workers=1):
	items = list(items)
	results = OrderedDict()
	for p_thres in thresholds:
		results[p_thres] = decode_corpus(items, bundle, cfg.with_threshold(p_thres), workers=workers)
		masked = sum(len(hyp.masked_positions) for hyp in results[p_thres])
		logger.info("threshold %g: %d masked tokens over %d utterances", p_thres, masked, len(items))
	return results


def measure_rtf(hypotheses):
	decode_ms = 0.0
	audio_ms = 0.0
	for hyp in hypotheses:
		decode_ms += hyp.decode_ms
		audio_ms += hyp.audio_ms
	if audio_ms <= 0.0:
		raise DecodeError("total audio duration is zero, real-time factor is undefined")
	return decode_ms / audio_ms


def write_hypotheses(path, hypotheses):
	write_json_lines(path, (hyp.to_dict() for hyp in hypotheses))


def read_hypotheses(path):
	hypotheses = []
	try:
		records = read_json_lines(path)
	except ValueError as e:
		raise HypothesisFormatError(path, 0, "malformed JSON (%s)" % e)
	for lineno, record in records:
		try:
			hypotheses.append(Hypothesis.from_dict(record))
		except (KeyError, TypeError, ValueError) as e:
			raise HypothesisFormatError(path, lineno, "invalid hypothesis record (%s)" % e)
	return hypotheses
