# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import math
from collections import OrderedDict
from fractions import Fraction

import numpy as np

from .exceptions import ScoreError
from .report import COLUMNS
from common_utils import logger
from common_utils.exceptions import NumericError


BETA_EPS = 1e-15
BETA_TINY = 1e-300
BETA_MAX_ITERATIONS = 10000


def discordant_pairs(flags_a, flags_b):
	if len(flags_a) != len(flags_b):
		raise ScoreError("paired samples differ in length: %d and %d" % (len(flags_a), len(flags_b)))
	b = sum(1 for a_ok, b_ok in zip(flags_a, flags_b) if a_ok and not b_ok)
	c = sum(1 for a_ok, b_ok in zip(flags_a, flags_b) if b_ok and not a_ok)
	return b, c


def mcnemar(flags_a, flags_b):
	"""
	Presný McNemarov test: obojstranný binomický test nesúhlasných párov
	s pravdepodobnosťou 1/2.
	"""
	b, c = discordant_pairs(flags_a, flags_b)
	trials = b + c
	if trials == 0:
		logger.warning("mcnemar: no discordant pairs, p-value is 1")
		return 1.0
	tail = sum(math.comb(trials, k) for k in range(max(b, c), trials + 1))
	return float(min(Fraction(1), Fraction(2 * tail, 2 ** trials)))


def continued_fraction(a, b, x):
	qab = a + b
	qap = a + 1.0
	qam = a - 1.0
	c = 1.0
	d = 1.0 - qab * x / qap
	if abs(d) < BETA_TINY:
		d = BETA_TINY
	d = 1.0 / d
	h = d
	for m in range(1, BETA_MAX_ITERATIONS + 1):
		m2 = 2 * m
		aa = m * (b - m) * x / ((qam + m2) * (a + m2))
		d = 1.0 + aa * d
		if abs(d) < BETA_TINY:
			d = BETA_TINY
		c = 1.0 + aa / c
		if abs(c) < BETA_TINY:
			c = BETA_TINY
		d = 1.0 / d
		h *= d * c
		aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
		d = 1.0 + aa * d
		if abs(d) < BETA_TINY:
			d = BETA_TINY
		c = 1.0 + aa / c
		if abs(c) < BETA_TINY:
			c = BETA_TINY
		d = 1.0 / d
		delta = d * c
		h *= delta
		if abs(delta - 1.0) < BETA_EPS:
			return h
	raise NumericError("incomplete beta continued fraction did not converge for a=%g b=%g x=%g" % (a, b, x))


def incomplete_beta(a, b, x):
	"""
	Regularizovaná neúplná beta funkcia I_x(a, b), Lentzova metóda.
	"""
	if x <= 0.0:
		return 0.0
	if x >= 1.0:
		return 1.0
	front = math.exp(math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log(1.0 - x))
	if x < (a + 1.0) / (a + b + 2.0):
		return front * continued_fraction(a, b, x) / a
	return 1.0 - front * continued_fraction(b, a, 1.0 - x) / b


def student_t_two_sided(t, df):
	return incomplete_beta(df / 2.0, 0.5, df / (df + t * t))


def paired_t_statistic(errs_a, errs_b):
	diffs = np.asarray(errs_a, dtype=np.float64) - np.asarray(errs_b, dtype=np.float64)
	if diffs.ndim != 1:
		raise ScoreError("paired samples must be flat sequences")
	if len(errs_a) != len(errs_b):
		raise ScoreError("paired samples differ in length: %d and %d" % (len(errs_a), len(errs_b)))
	if diffs.size < 2:
		raise ScoreError("paired t-test needs at least two pairs, got %d" % diffs.size)
	mean = float(np.mean(diffs))
	std = float(np.std(diffs, ddof=1))
	df = diffs.size - 1
	if std == 0.0:
		return (0.0 if mean == 0.0 else math.copysign(math.inf, mean)), df
	return mean / (std / math.sqrt(diffs.size)), df


def paired_ttest(errs_a, errs_b):
	t, df = paired_t_statistic(errs_a, errs_b)
	if math.isinf(t):
		logger.warning("paired t-test: differences are constant and nonzero, p-value is 0")
		return 0.0
	if t == 0.0 and np.all(np.asarray(errs_a, dtype=np.float64) == np.asarray(errs_b, dtype=np.float64)):
		logger.warning("paired t-test: samples are identical, p-value is 1")
		return 1.0
	return min(1.0, student_t_two_sided(t, df))


def compare_reports(report_a, report_b):
	"""
	Porovnanie dvoch systémov na spoločných vetách: rozdiely stĺpcov,
	t-test nad normalizovanými chybami viet a McNemarov test správnosti
	celých viet.
	"""
	utts_b = dict((utt.utt_id, utt) for utt in report_b.utterances)
	pairs = [(utt, utts_b[utt.utt_id]) for utt in report_a.utterances if utt.utt_id in utts_b]
	if not pairs:
		raise ScoreError("the two reports share no utterances")
	columns_a = report_a.columns()
	columns_b = report_b.columns()
	result = OrderedDict()
	for key in COLUMNS:
		entry = OrderedDict([
			('a', columns_a[key]),
			('b', columns_b[key]),
			('delta', columns_b[key] - columns_a[key]),
			('ttest_p', None),
		])
		if len(pairs) >= 2:
			entry['ttest_p'] = paired_ttest(
				[a.normalized_columns()[key] for a, __ in pairs],
				[b.normalized_columns()[key] for __, b in pairs]
			)
		result[key] = entry
	return OrderedDict([
		('utterances', len(pairs)),
		('columns', result),
		('mcnemar_p', mcnemar([a.correct for a, __ in pairs], [b.correct for __, b in pairs])),
	])
