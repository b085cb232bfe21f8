# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import random
from collections import OrderedDict
from functools import lru_cache

import numpy as np
from django.test import SimpleTestCase
from scipy import special, stats

from .alignment import align, count_ops, edit_distance, MATCH, SUB, DEL, INS
from .exceptions import ScoreError
from .report import score_corpus, per_score, render_table, COLUMNS
from .significance import mcnemar, paired_ttest, incomplete_beta, compare_reports
from vocab.exceptions import PinyinCoverageError
from vocab.pinyin import PinyinTable
from vocab.vocabulary import MAN_CHAR, ENG


TABLE = PinyinTable([("我", "wo"), ("很", "hen"), ("狠", "hen"), ("好", "hao"), ("号", "hao")])


def brute_distance(ref, hyp):
	@lru_cache(maxsize=None)
	def distance(i, j):
		if i == 0:
			return j
		if j == 0:
			return i
		return min(
			distance(i - 1, j) + 1,
			distance(i, j - 1) + 1,
			distance(i - 1, j - 1) + (0 if ref[i - 1] == hyp[j - 1] else 1),
		)
	return distance(len(ref), len(hyp))


def alignment_cost(ops):
	counts = count_ops(ops)
	return counts[SUB] + counts[DEL] + counts[INS]


def random_tokens(rng, max_length, alphabet):
	return [rng.choice(alphabet) for __ in range(rng.randint(0, max_length))]


def random_corpus(rng, size):
	alphabet = ["我", "很", "狠", "好", "号", "happy", "day"]
	refs = OrderedDict()
	hyps = OrderedDict()
	for idx in range(size):
		utt_id = 'utt%d' % idx
		refs[utt_id] = random_tokens(rng, 8, alphabet) or ["我"]
		hyps[utt_id] = random_tokens(rng, 8, alphabet)
	return refs, hyps


class AlignTest(SimpleTestCase):
	def test_deletion(self):
		ops = align(["我", "很", "happy"], ["我", "happy"])
		self.assertEqual([op.kind for op in ops], [MATCH, DEL, MATCH])
		self.assertEqual(ops[1].ref, "很")
		self.assertIsNone(ops[1].hyp)

	def test_identity(self):
		tokens = ["我", "很", "happy"]
		self.assertEqual([op.kind for op in align(tokens, tokens)], [MATCH] * 3)

	def test_empty(self):
		self.assertEqual(align([], []), [])
		self.assertEqual([op.kind for op in align([], ["a", "b"])], [INS, INS])
		self.assertEqual([op.kind for op in align(["a"], [])], [DEL])

	def test_tie_prefers_substitution(self):
		self.assertEqual([op.kind for op in align(["a", "b"], ["b", "a"])], [SUB, SUB])

	def test_substitution_stays_in_place(self):
		ops = align(["我", "很", "happy"], ["我", "狠"])
		self.assertEqual([op.kind for op in ops], [MATCH, SUB, DEL])
		self.assertEqual((ops[1].ref, ops[1].hyp), ("很", "狠"))
		self.assertEqual(ops[2].ref, "happy")

	def test_brute_force(self):
		rng = random.Random(3)
		for __ in range(10000):
			ref = random_tokens(rng, 8, "abc")
			hyp = random_tokens(rng, 8, "abc")
			ops = align(ref, hyp)
			self.assertEqual(alignment_cost(ops), brute_distance(tuple(ref), tuple(hyp)))
			self.assertEqual([op.ref for op in ops if op.kind != INS], ref)
			self.assertEqual([op.hyp for op in ops if op.kind != DEL], hyp)

	def test_metric(self):
		rng = random.Random(4)
		for __ in range(500):
			a, b, c = [random_tokens(rng, 6, "abcd") for __ in range(3)]
			self.assertEqual(edit_distance(a, a), 0)
			self.assertEqual(edit_distance(a, b), edit_distance(b, a))
			self.assertLessEqual(edit_distance(a, c), edit_distance(a, b) + edit_distance(b, c))


class ReportTest(SimpleTestCase):
	def test_decomposition_example(self):
		refs = OrderedDict([
			('sub', ["我"] * 500),
			('del', ["我"] * 300),
			('ins', ["我"] * 200),
		])
		hyps = {
			'sub': ["好"] * 125 + ["我"] * 375,
			'del': ["我"] * 249,
			'ins': ["我"] * 218,
		}
		columns = score_corpus(refs, hyps).columns()
		self.assertAlmostEqual(columns['sub'], 12.5)
		self.assertAlmostEqual(columns['del_all'], 5.1)
		self.assertAlmostEqual(columns['ins'], 1.8)
		self.assertAlmostEqual(columns['ter'], 19.4)
		self.assertAlmostEqual(columns['del_man'], 5.1)
		self.assertAlmostEqual(columns['del_eng'], 0.0)

	def test_identity_on_random_corpora(self):
		rng = random.Random(5)
		for __ in range(50):
			refs, hyps = random_corpus(rng, 10)
			report = score_corpus(refs, hyps, pinyin_table=TABLE)
			self.assertEqual(report.errors, report.counts[SUB] + report.counts[DEL] + report.counts[INS])
			for kind in (SUB, DEL, INS):
				self.assertEqual(sum(report.by_language[lang][kind] for lang in report.by_language), report.counts[kind])
			columns = report.columns()
			self.assertAlmostEqual(columns['sub'] + columns['del_all'] + columns['ins'], columns['ter'])
			self.assertAlmostEqual(columns['man'] + columns['eng'], columns['ter'])
			self.assertAlmostEqual(columns['del_man'] + columns['del_eng'], columns['del_all'])
			self.assertLessEqual(columns['man_pinyin'], columns['man'])

	def test_self_score(self):
		refs, __ = random_corpus(random.Random(6), 20)
		self.assertEqual(score_corpus(refs, refs).ter, 0.0)

	def test_empty_hypotheses(self):
		refs = OrderedDict([('a', ["我", "很"]), ('b', ["happy"])])
		with self.assertLogs('codeswitch', 'WARNING'):
			report = score_corpus(refs, {})
		self.assertEqual(report.ter, 1.0)
		self.assertEqual(report.counts[DEL], 3)
		self.assertEqual(report.by_language[MAN_CHAR][DEL], 2)
		self.assertEqual(report.by_language[ENG][DEL], 1)

	def test_insertion_uses_hypothesis_language(self):
		report = score_corpus({'a': ["我"]}, {'a': ["我", "happy"]})
		self.assertEqual(report.by_language[ENG][INS], 1)
		self.assertEqual(report.by_language[MAN_CHAR][INS], 0)

	def test_no_reference_tokens(self):
		with self.assertRaises(ScoreError):
			score_corpus({'a': []}, {'a': []})

	def test_correct_flags(self):
		report = score_corpus(OrderedDict([('a', ["我"]), ('b', ["很"])]), {'a': ["我"], 'b': ["狠"]})
		self.assertEqual(list(report.flags().items()), [('a', True), ('b', False)])

	def test_table(self):
		refs = {'a': ["我", "很", "happy"]}
		report = score_corpus(refs, {'a': ["我", "狠"]}, pinyin_table=TABLE)
		text = render_table([('mask_ctc', report)])
		self.assertIn('mask_ctc', text)
		for key in COLUMNS:
			self.assertIn(key, text)
		self.assertEqual(report.to_dict()['columns']['man_pinyin'], 0.0)


class PinyinScoreTest(SimpleTestCase):
	def test_homophone(self):
		refs = {'a': ["我", "很", "happy"]}
		hyps = {'a': ["我", "狠", "happy"]}
		report = score_corpus(refs, hyps, pinyin_table=TABLE)
		self.assertAlmostEqual(report.ter, 1.0 / 3.0)
		self.assertEqual(per_score(refs, hyps, TABLE), 0.0)
		self.assertEqual(report.per, 0.0)
		self.assertEqual(report.columns()['man_pinyin'], 0.0)

	def test_not_above_ter(self):
		rng = random.Random(7)
		for __ in range(100):
			refs, hyps = random_corpus(rng, 5)
			self.assertLessEqual(per_score(refs, hyps, TABLE), score_corpus(refs, hyps).ter + 1e-12)

	def test_english_only(self):
		refs = {'a': ["happy", "day"], 'b': ["good"]}
		hyps = {'a': ["happy"], 'b': ["bad", "day"]}
		self.assertEqual(per_score(refs, hyps, TABLE), score_corpus(refs, hyps).ter)

	def test_coverage(self):
		with self.assertRaises(PinyinCoverageError):
			per_score({'a': ["是"]}, {'a': ["我"]}, TABLE)


class McNemarTest(SimpleTestCase):
	def flags(self, b, c, both=0, neither=0):
		flags_a = [True] * b + [False] * c + [True] * both + [False] * neither
		flags_b = [False] * b + [True] * c + [True] * both + [False] * neither
		return flags_a, flags_b

	def test_symmetric(self):
		self.assertEqual(mcnemar(*self.flags(1, 1)), 1.0)

	def test_exact_tail(self):
		self.assertAlmostEqual(mcnemar(*self.flags(10, 2, both=5)), 2.0 * (66 + 12 + 1) / 4096.0, places=15)

	def test_no_discordant(self):
		with self.assertLogs('codeswitch', 'WARNING'):
			self.assertEqual(mcnemar(*self.flags(0, 0, both=3, neither=2)), 1.0)

	def test_scipy_oracle(self):
		rng = random.Random(8)
		for __ in range(100):
			b = rng.randint(0, 40)
			c = rng.randint(0, 40)
			if b + c == 0:
				continue
			expected = stats.binomtest(b, b + c, 0.5).pvalue
			self.assertAlmostEqual(mcnemar(*self.flags(b, c)), expected, delta=1e-6)

	def test_length_mismatch(self):
		with self.assertRaises(ScoreError):
			mcnemar([True], [True, False])


class TTestTest(SimpleTestCase):
	def test_identical(self):
		with self.assertLogs('codeswitch', 'WARNING'):
			self.assertEqual(paired_ttest([0.1, 0.2, 0.3], [0.1, 0.2, 0.3]), 1.0)

	def test_constant_difference(self):
		errs = np.arange(10) * 0.5
		with self.assertLogs('codeswitch', 'WARNING'):
			self.assertLess(paired_ttest(errs + 0.25, errs), 1e-10)

	def test_scipy_oracle(self):
		rng = np.random.default_rng(9)
		for __ in range(100):
			n = int(rng.integers(2, 40))
			a = rng.normal(size=n)
			b = a + rng.normal(loc=rng.normal(scale=0.5), size=n)
			self.assertAlmostEqual(paired_ttest(a, b), stats.ttest_rel(a, b).pvalue, delta=1e-6)

	def test_incomplete_beta(self):
		rng = np.random.default_rng(10)
		for __ in range(100):
			a, b = rng.uniform(0.2, 30.0, size=2)
			x = rng.uniform()
			self.assertAlmostEqual(incomplete_beta(a, b, x), special.betainc(a, b, x), delta=1e-10)

	def test_too_few(self):
		with self.assertRaises(ScoreError):
			paired_ttest([0.1], [0.2])


class CompareTest(SimpleTestCase):
	def test_self_comparison(self):
		refs, hyps = random_corpus(random.Random(11), 30)
		report = score_corpus(refs, hyps)
		result = compare_reports(report, report)
		self.assertEqual(result['mcnemar_p'], 1.0)
		for entry in result['columns'].values():
			self.assertEqual(entry['delta'], 0.0)
			self.assertEqual(entry['ttest_p'], 1.0)

	def test_better_system(self):
		refs, hyps = random_corpus(random.Random(12), 40)
		worse = score_corpus(refs, hyps)
		better = score_corpus(refs, refs)
		result = compare_reports(worse, better)
		self.assertLess(result['columns']['ter']['delta'], 0.0)
		self.assertLess(result['columns']['ter']['ttest_p'], 0.01)
		self.assertLess(result['mcnemar_p'], 0.01)
