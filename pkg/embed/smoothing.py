# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import numpy as np

from .exceptions import EmbeddingError
from common_utils import logger
from loss.objectives import ConventionalSmoothing


MODE_THRESHOLD = 'threshold'
MODE_TOPN = 'topn'
MODES = (MODE_THRESHOLD, MODE_TOPN)


class SmoothingConfig(object):
	def __init__(self, mode=MODE_TOPN, tau=0.5, n=10, epsilon=0.1, same_language=False):
		if mode not in MODES:
			raise EmbeddingError("unknown similarity mode %r" % mode)
		if not -1.0 < tau < 1.0:
			raise EmbeddingError("tau must be in (-1, 1), got %r" % tau)
		if n < 1:
			raise EmbeddingError("n must be at least 1, got %r" % n)
		if not 0.0 <= epsilon < 1.0:
			raise EmbeddingError("epsilon must be in [0, 1), got %r" % epsilon)
		self.mode = mode
		self.tau = float(tau)
		self.n = int(n)
		self.epsilon = float(epsilon)
		self.same_language = bool(same_language)

	def to_dict(self):
		return {
			'mode': self.mode,
			'tau': self.tau,
			'n': self.n,
			'epsilon': self.epsilon,
			'same_language': self.same_language,
		}


def _ranked_candidates(token_id, emb, same_language):
	if not emb.has_vector[token_id]:
		logger.warning("token %r has no embedding, similarity set is empty", emb.vocab[token_id])
		return np.zeros(0, dtype=np.int64), np.zeros(0)
	cos = emb.cosines(token_id)
	candidates = emb.has_vector.copy()
	candidates[token_id] = False
	if same_language:
		tag = emb.vocab.tag(token_id)
		candidates &= np.asarray([t == tag for t in emb.vocab.tags])
	ids = np.flatnonzero(candidates)
	scores = cos[ids]
	# descending cosine, ascending id on ties
	order = np.lexsort((ids, -scores))
	return ids[order], scores[order]


def similar_by_threshold(token_id, emb, tau, same_language=False):
	ids, scores = _ranked_candidates(token_id, emb, same_language)
	return [int(idx) for idx in ids[scores >= tau]]


def similar_topn(token_id, emb, n, same_language=False):
	ids, __ = _ranked_candidates(token_id, emb, same_language)
	return [int(idx) for idx in ids[:n]]


def smooth_distribution(target, similar, epsilon, vocab_size, excluded=()):
	similar = [idx for idx in similar if idx != target and idx not in excluded]
	if not similar:
		logger.warning("empty similarity set for token %d, using conventional smoothing", target)
		return ConventionalSmoothing(epsilon, vocab_size, excluded)(target)
	q = np.zeros(vocab_size)
	q[similar] = epsilon / len(similar)
	q[target] = 1.0 - epsilon
	return q


class SmoothingTable(object):
	"""
	Predpočítané množiny podobných tokenov pre celý slovník. Tokeny bez
	vektora dostanú konvenčné vyhladenie.
	"""

	def __init__(self, emb, cfg):
		self.cfg = cfg
		self.vocab_size = len(emb.vocab)
		self.excluded = (emb.vocab.mask, emb.vocab.blank)
		self.fallback = ConventionalSmoothing(cfg.epsilon, self.vocab_size, self.excluded)
		self.similar = {}
		for token_id in range(self.vocab_size):
			if not emb.has_vector[token_id]:
				continue
			if cfg.mode == MODE_THRESHOLD:
				similar = similar_by_threshold(token_id, emb, cfg.tau, cfg.same_language)
			else:
				similar = similar_topn(token_id, emb, cfg.n, cfg.same_language)
			if similar:
				self.similar[token_id] = similar
		logger.info("similarity sets ready for %d of %d tokens", len(self.similar), self.vocab_size)

	def __call__(self, target):
		similar = self.similar.get(target)
		if similar is None:
			return self.fallback(target)
		return smooth_distribution(target, similar, self.cfg.epsilon, self.vocab_size, self.excluded)
