# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io

import numpy as np

from .exceptions import EmbeddingError, EmbeddingFormatError
from common_utils import logger
from vocab.vocabulary import tokenize


class WordEmbedding(object):
	"""
	Vektor pre každý token slovníka. Tokeny bez vektora majú nulový riadok
	a `has_vector` nastavené na False.
	"""

	def __init__(self, vocab, vectors, has_vector=None):
		vectors = np.asarray(vectors, dtype=np.float64)
		if vectors.ndim != 2 or vectors.shape[0] != len(vocab):
			raise EmbeddingError("expected %d vectors, got array of shape %s" % (len(vocab), vectors.shape))
		if vectors.shape[1] <= 0:
			raise EmbeddingError("embedding dimension must be positive")
		if has_vector is None:
			has_vector = np.linalg.norm(vectors, axis=1) > 0
		self.vocab = vocab
		self.vectors = vectors
		self.has_vector = np.asarray(has_vector, dtype=bool)
		norms = np.linalg.norm(vectors, axis=1, keepdims=True)
		self.unit = np.where(self.has_vector[:, None], vectors / np.where(norms > 0, norms, 1.0), 0.0)

	@property
	def dim(self):
		return self.vectors.shape[1]

	@property
	def coverage(self):
		return float(np.mean(self.has_vector)) if len(self.has_vector) else 0.0

	def cosines(self, token_id):
		return np.clip(self.unit @ self.unit[token_id], -1.0, 1.0)

	def cosine(self, first_id, second_id):
		return float(np.clip(np.dot(self.unit[first_id], self.unit[second_id]), -1.0, 1.0))


def load_vectors(path, vocab):
	has_vector = np.zeros(len(vocab), dtype=bool)
	with io.open(path, 'r', encoding='utf-8') as fp:
		header = fp.readline().split()
		if len(header) != 2:
			raise EmbeddingFormatError(path, 1, "expected header '<count> <dim>'")
		try:
			count, dim = int(header[0]), int(header[1])
		except ValueError:
			raise EmbeddingFormatError(path, 1, "header values are not integers")
		if dim <= 0:
			raise EmbeddingFormatError(path, 1, "dimension must be positive")
		vectors = np.zeros((len(vocab), dim))
		rows = 0
		for lineno, line in enumerate(fp, 2):
			parts = line.split()
			if not parts:
				continue
			token = parts[0]
			if len(parts) - 1 != dim:
				raise EmbeddingFormatError(path, lineno, "token %r has %d values, expected %d" % (token, len(parts) - 1, dim))
			try:
				values = [float(part) for part in parts[1:]]
			except ValueError:
				raise EmbeddingFormatError(path, lineno, "malformed float in vector of %r" % token)
			rows += 1
			idx = vocab.id_of.get(token)
			if idx is None:
				continue
			vectors[idx] = values
			has_vector[idx] = True
	if rows != count:
		logger.warning("%s: header announces %d vectors, found %d", path, count, rows)
	embedding = WordEmbedding(vocab, vectors, has_vector)
	logger.info("loaded %d vectors from %s, vocabulary coverage %.3f", int(np.sum(has_vector)), path, embedding.coverage)
	return embedding


def save_vectors(path, embedding):
	ids = [idx for idx in range(len(embedding.vocab)) if embedding.has_vector[idx]]
	with io.open(path, 'w', encoding='utf-8') as fp:
		fp.write('%d %d\n' % (len(ids), embedding.dim))
		for idx in ids:
			fp.write('%s %s\n' % (embedding.vocab[idx], ' '.join(repr(float(value)) for value in embedding.vectors[idx])))


def cooccurrence_counts(corpus_lines, vocab, window):
	counts = np.zeros((len(vocab), len(vocab)))
	observed = np.zeros(len(vocab), dtype=bool)
	for line in corpus_lines:
		ids = [vocab.id_of[token] for token in tokenize(line) if token in vocab.id_of]
		for pos, center in enumerate(ids):
			observed[center] = True
			for other in range(max(0, pos - window), min(len(ids), pos + window + 1)):
				if other != pos:
					counts[center, ids[other]] += 1.0
	return counts, observed


def ppmi_matrix(counts):
	total = counts.sum()
	if total == 0:
		return np.zeros_like(counts)
	row = counts.sum(axis=1, keepdims=True)
	col = counts.sum(axis=0, keepdims=True)
	nonzero = counts > 0
	expected = np.where(nonzero, row * col, 1.0)
	pmi = np.log(np.where(nonzero, counts * total, 1.0) / expected)
	return np.where(nonzero, np.maximum(pmi, 0.0), 0.0)


def truncated_svd(matrix, dim):
	"""
	Prvých `dim` singulárnych trojíc. Znamienko stĺpcov je určené tak, aby
	najväčší prvok stĺpca U v absolútnej hodnote bol kladný.
	"""
	u, s, vt = np.linalg.svd(matrix)
	u = u[:, :dim]
	s = s[:dim]
	v = vt[:dim].T
	pivots = np.argmax(np.abs(u), axis=0)
	signs = np.sign(u[pivots, np.arange(u.shape[1])])
	signs[signs == 0] = 1.0
	return u * signs, s, v * signs


def train_ppmi_svd(corpus_lines, vocab, dim, window):
	if dim < 1 or dim > len(vocab):
		raise EmbeddingError("dimension %d must be in 1..%d" % (dim, len(vocab)))
	if window < 1:
		raise EmbeddingError("window must be at least 1, got %d" % window)
	counts, observed = cooccurrence_counts(corpus_lines, vocab, window)
	if not observed.any():
		logger.warning("empty corpus, all %d embedding vectors are zero", len(vocab))
		return WordEmbedding(vocab, np.zeros((len(vocab), dim)), observed)

	u, s, v = truncated_svd(ppmi_matrix(counts), dim)
	vectors = (u + v) * np.sqrt(s)
	vectors[~observed] = 0.0
	norms = np.linalg.norm(vectors, axis=1)
	has_vector = observed & (norms > 1e-12)
	vectors = np.where(has_vector[:, None], vectors / np.where(norms > 1e-12, norms, 1.0)[:, None], 0.0)
	missing = [vocab[idx] for idx in range(len(vocab)) if not has_vector[idx]]
	if missing:
		logger.warning("%d tokens have no embedding: %s", len(missing), ' '.join(missing[:20]))
	return WordEmbedding(vocab, vectors, has_vector)
