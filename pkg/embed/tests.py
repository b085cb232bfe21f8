# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io

import numpy as np
from django.test import SimpleTestCase

from .exceptions import EmbeddingError, EmbeddingFormatError
from .smoothing import SmoothingConfig, SmoothingTable, similar_by_threshold, similar_topn, smooth_distribution
from .vectors import WordEmbedding, load_vectors, save_vectors, train_ppmi_svd, ppmi_matrix, truncated_svd, cooccurrence_counts
from common_utils.tests_common import TemporaryDirectoryMixin, ArrayAssertMixin
from vocab.vocabulary import Vocabulary, SPECIAL_TOKENS, SPECIAL, ENG, MAN_CHAR


def make_vocab(words, chars=()):
	tokens = list(SPECIAL_TOKENS) + list(chars) + list(words)
	tags = [SPECIAL] * len(SPECIAL_TOKENS) + [MAN_CHAR] * len(chars) + [ENG] * len(words)
	return Vocabulary(tokens, tags)


def embedding_from_rows(rows):
	words = ['w%d' % idx for idx in range(len(rows))]
	vocab = make_vocab(words)
	vectors = np.zeros((len(vocab), len(rows[0])))
	vectors[len(SPECIAL_TOKENS):] = rows
	return WordEmbedding(vocab, vectors)


def offset(idx):
	return idx + len(SPECIAL_TOKENS)


class LoadVectorsTest(TemporaryDirectoryMixin, ArrayAssertMixin, SimpleTestCase):
	def write(self, text):
		path = self.tmp_path('vectors.txt')
		with io.open(path, 'w', encoding='utf-8') as fp:
			fp.write(text)
		return path

	def rows(self, tokens, dim):
		rng = np.random.default_rng(1)
		return ''.join('%s %s\n' % (token, ' '.join('%.6f' % v for v in rng.normal(size=dim))) for token in tokens)

	def test_header_and_rows(self):
		vocab = make_vocab(['day', 'good', 'happy'])
		emb = load_vectors(self.write('3 64\n' + self.rows(['day', 'good', 'happy'], 64)), vocab)
		self.assertEqual(emb.dim, 64)
		self.assertEqual(int(emb.has_vector.sum()), 3)
		self.assertAlmostEqual(emb.coverage, 3.0 / 7)

	def test_unknown_token_ignored(self):
		vocab = make_vocab(['day', 'good'])
		emb = load_vectors(self.write('3 4\n' + self.rows(['day', 'good', 'zebra'], 4)), vocab)
		self.assertEqual(int(emb.has_vector.sum()), 2)

	def test_short_row(self):
		vocab = make_vocab(['day', 'good'])
		text = '2 64\n' + self.rows(['day'], 64) + self.rows(['good'], 63)
		with self.assertRaises(EmbeddingFormatError) as ctx:
			load_vectors(self.write(text), vocab)
		self.assertEqual(ctx.exception.lineno, 3)

	def test_malformed(self):
		vocab = make_vocab(['day'])
		with self.assertRaises(EmbeddingFormatError):
			load_vectors(self.write('1 2\nday 0.5 x\n'), vocab)
		with self.assertRaises(EmbeddingFormatError):
			load_vectors(self.write('day 0.5 0.1\n'), vocab)

	def test_round_trip(self):
		vocab = make_vocab(['day', 'good'])
		emb = load_vectors(self.write('2 3\nday 1 2 3\ngood -1 0.5 0\n'), vocab)
		save_vectors(self.tmp_path('copy.txt'), emb)
		copy = load_vectors(self.tmp_path('copy.txt'), vocab)
		self.assertArrayEqual(copy.vectors, emb.vectors)
		self.assertArrayEqual(copy.has_vector, emb.has_vector)


class PPMITest(ArrayAssertMixin, SimpleTestCase):
	def test_alternating_corpus(self):
		vocab = make_vocab(['a', 'b', 'c'])
		emb = train_ppmi_svd(['a b a b a b'], vocab, 2, 1)
		a, b, c = vocab.id_of['a'], vocab.id_of['b'], vocab.id_of['c']
		self.assertFalse(emb.has_vector[c])
		self.assertGreater(emb.cosine(a, b), emb.cosine(a, c))

	def test_brute_force_ppmi(self):
		vocab = make_vocab(['a', 'b', 'c', 'd'])
		lines = ['a b c', 'c d a b', 'b b d']
		counts, observed = cooccurrence_counts(lines, vocab, 2)
		self.assertTrue(observed[vocab.id_of['d']])
		total = counts.sum()
		expected = np.zeros_like(counts)
		for i in range(len(vocab)):
			for j in range(len(vocab)):
				if counts[i, j] > 0:
					pmi = np.log(counts[i, j] * total / (counts[i].sum() * counts[:, j].sum()))
					expected[i, j] = max(pmi, 0.0)
		self.assertArrayClose(ppmi_matrix(counts), expected, atol=1e-12)

	def test_full_rank_reconstruction(self):
		vocab = make_vocab(['a', 'b', 'c', 'd', 'e'])
		counts, __ = cooccurrence_counts(['a b c d e a', 'e d b', 'c c a e'], vocab, 2)
		matrix = ppmi_matrix(counts)
		u, s, v = truncated_svd(matrix, len(vocab))
		self.assertArrayClose(u @ np.diag(s) @ v.T, matrix, atol=1e-8)

	def test_rows_normalized(self):
		vocab = make_vocab(['a', 'b', 'c', 'd'])
		emb = train_ppmi_svd(['a b c d', 'd c b a b', 'a c'], vocab, 3, 1)
		norms = np.linalg.norm(emb.vectors[emb.has_vector], axis=1)
		self.assertArrayClose(norms, np.ones(len(norms)), atol=1e-12)

	def test_deterministic(self):
		vocab = make_vocab(['a', 'b', 'c', 'd'])
		lines = ['a b c d', 'd c b a b', 'a c']
		first = train_ppmi_svd(lines, vocab, 3, 2)
		second = train_ppmi_svd(lines, vocab, 3, 2)
		self.assertArrayEqual(first.vectors, second.vectors)

	def test_empty_corpus(self):
		vocab = make_vocab(['a', 'b'])
		with self.assertLogs('codeswitch', level='WARNING'):
			emb = train_ppmi_svd([], vocab, 2, 1)
		self.assertFalse(emb.has_vector.any())
		self.assertEqual(float(np.abs(emb.vectors).sum()), 0.0)


class SimilarityTest(SimpleTestCase):
	def setUp(self):
		rng = np.random.default_rng(20)
		self.emb = embedding_from_rows(rng.normal(size=(20, 5)))

	def test_threshold_boundaries(self):
		token = offset(0)
		self.assertEqual(similar_by_threshold(token, self.emb, 1.0 + 1e-9), [])
		everything = similar_by_threshold(token, self.emb, -1.0)
		self.assertEqual(sorted(everything), [offset(idx) for idx in range(1, 20)])

	def test_threshold_brute_force(self):
		unit = self.emb.unit
		for token in range(offset(0), offset(20)):
			expected = set()
			for other in range(offset(0), offset(20)):
				if other == token:
					continue
				cos = np.dot(unit[token], unit[other])
				if cos >= 0.5:
					expected.add(other)
			self.assertEqual(set(similar_by_threshold(token, self.emb, 0.5)), expected)

	def test_topn_example(self):
		emb = embedding_from_rows(np.array([[1.0, 0.0], [0.9, 0.1], [0.0, 1.0]]))
		self.assertEqual(similar_topn(offset(0), emb, 1), [offset(1)])

	def test_topn_everything(self):
		self.assertEqual(len(similar_topn(offset(3), self.emb, 50)), 19)

	def test_ties_by_id(self):
		emb = embedding_from_rows(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 2.0], [0.0, 1.0]]))
		self.assertEqual(similar_topn(offset(0), emb, 3), [offset(1), offset(2), offset(3)])
		self.assertEqual(similar_topn(offset(1), emb, 1), [offset(2)])

	def test_topn_within_threshold(self):
		for token in range(offset(0), offset(20)):
			top = similar_topn(token, self.emb, 10)
			tau = self.emb.cosines(token)[top[-1]]
			self.assertTrue(set(top).issubset(set(similar_by_threshold(token, self.emb, tau))))

	def test_topn_exhaustive_large(self):
		rng = np.random.default_rng(21)
		emb = embedding_from_rows(rng.normal(size=(1000, 8)))
		vectors = emb.vectors
		for token in (offset(0), offset(517), offset(999)):
			scores = []
			for other in range(offset(0), offset(1000)):
				if other == token:
					continue
				cos = np.dot(vectors[token], vectors[other]) / (np.linalg.norm(vectors[token]) * np.linalg.norm(vectors[other]))
				scores.append((-cos, other))
			expected = [other for __, other in sorted(scores)[:10]]
			self.assertEqual(similar_topn(token, emb, 10), expected)

	def test_missing_vector(self):
		with self.assertLogs('codeswitch', level='WARNING'):
			self.assertEqual(similar_topn(0, self.emb, 5), [])

	def test_same_language(self):
		vocab = make_vocab(['x', 'y'], chars=['我', '很'])
		vectors = np.zeros((len(vocab), 2))
		vectors[vocab.id_of['我']] = [1.0, 0.0]
		vectors[vocab.id_of['x']] = [1.0, 0.01]
		vectors[vocab.id_of['很']] = [0.5, 0.5]
		vectors[vocab.id_of['y']] = [0.0, 1.0]
		emb = WordEmbedding(vocab, vectors)
		self.assertEqual(similar_topn(vocab.id_of['我'], emb, 1), [vocab.id_of['x']])
		self.assertEqual(similar_topn(vocab.id_of['我'], emb, 1, same_language=True), [vocab.id_of['很']])


class SmoothDistributionTest(SimpleTestCase):
	def test_ten_neighbours(self):
		q = smooth_distribution(0, list(range(1, 11)), 0.1, 100)
		self.assertAlmostEqual(q[0], 0.9)
		for idx in range(1, 11):
			self.assertAlmostEqual(q[idx], 0.01)
		self.assertEqual(int(np.count_nonzero(q)), 11)
		self.assertAlmostEqual(q.sum(), 1.0, places=12)

	def test_zero_epsilon(self):
		q = smooth_distribution(3, [1, 2], 0.0, 10)
		self.assertEqual(list(q), [0.0, 0.0, 0.0, 1.0] + [0.0] * 6)

	def test_single_neighbour(self):
		q = smooth_distribution(2, [5], 0.1, 8)
		self.assertAlmostEqual(q[2], 0.9)
		self.assertAlmostEqual(q[5], 0.1)
		self.assertEqual(int(np.count_nonzero(q)), 2)

	def test_empty_set_fallback(self):
		with self.assertLogs('codeswitch', level='WARNING'):
			q = smooth_distribution(1, [], 0.1, 5)
		self.assertAlmostEqual(q[1], 0.9)
		self.assertAlmostEqual(q[0], 0.025)
		self.assertAlmostEqual(q.sum(), 1.0, places=12)

	def test_table(self):
		rng = np.random.default_rng(4)
		emb = embedding_from_rows(rng.normal(size=(12, 4)))
		table = SmoothingTable(emb, SmoothingConfig(n=3))
		size = len(emb.vocab)
		q = table(offset(2))
		self.assertEqual(int(np.count_nonzero(q)), 4)
		for idx in similar_topn(offset(2), emb, 3):
			self.assertAlmostEqual(q[idx], 0.1 / 3)
		# tokens without vectors fall back to uniform smoothing
		fallback = table(emb.vocab.unk)
		self.assertEqual(int(np.count_nonzero(fallback)), size - 2)
		self.assertAlmostEqual(fallback[emb.vocab.unk], 0.9)
		self.assertEqual(fallback[emb.vocab.mask], 0.0)
		self.assertEqual(fallback[emb.vocab.blank], 0.0)
		self.assertAlmostEqual(fallback.sum(), 1.0, places=12)

	def test_config_validation(self):
		with self.assertRaises(EmbeddingError):
			SmoothingConfig(tau=1.0)
		with self.assertRaises(EmbeddingError):
			SmoothingConfig(n=0)
		with self.assertRaises(EmbeddingError):
			SmoothingConfig(mode='nearest')


def exhaustive_topn(emb, target, n):
	scored = []
	for idx in range(len(emb.vocab)):
		if idx == target or not emb.has_vector[idx]:
			continue
		first = emb.vectors[target]
		second = emb.vectors[idx]
		scored.append((-float(np.dot(first, second) / (np.linalg.norm(first) * np.linalg.norm(second))), idx))
	return [idx for __, idx in sorted(scored)[:n]]


class RandomSmoothingTest(SimpleTestCase):
	def test_random_cases(self):
		rng = np.random.default_rng(21)
		words = ['w%d' % idx for idx in range(30)]
		vocab = make_vocab(words)
		for __ in range(1000):
			vectors = np.zeros((len(vocab), 6))
			vectors[len(SPECIAL_TOKENS):] = rng.normal(size=(len(words), 6))
			if rng.random() < 0.2:
				# identical rows force a cosine tie
				source, copy = rng.choice(len(words), size=2, replace=False)
				vectors[offset(copy)] = vectors[offset(source)]
			emb = WordEmbedding(vocab, vectors)
			target = offset(int(rng.integers(len(words))))
			similar = similar_topn(target, emb, 10)
			self.assertEqual(similar, exhaustive_topn(emb, target, 10))
			q = smooth_distribution(target, similar, 0.1, len(vocab))
			self.assertEqual(int(np.count_nonzero(q)), 11)
			self.assertAlmostEqual(q[target], 0.9)
			for idx in similar:
				self.assertAlmostEqual(q[idx], 0.01)
			self.assertAlmostEqual(q.sum(), 1.0, places=12)
