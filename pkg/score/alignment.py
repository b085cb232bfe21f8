# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from collections import namedtuple

import numpy as np


MATCH = 'match'
SUB = 'sub'
DEL = 'del'
INS = 'ins'


AlignmentOp = namedtuple('AlignmentOp', ['kind', 'ref', 'hyp'])


def distance_table(ref, hyp):
	table = np.zeros((len(ref) + 1, len(hyp) + 1), dtype=np.int64)
	table[:, 0] = np.arange(len(ref) + 1)
	table[0, :] = np.arange(len(hyp) + 1)
	for i in range(1, len(ref) + 1):
		for j in range(1, len(hyp) + 1):
			cost = 0 if ref[i - 1] == hyp[j - 1] else 1
			table[i, j] = min(table[i - 1, j - 1] + cost, table[i - 1, j] + 1, table[i, j - 1] + 1)
	return table


def edit_distance(ref, hyp):
	return int(distance_table(ref, hyp)[len(ref), len(hyp)])


def suffix_table(ref, hyp):
	# cell (i, j) holds the distance between ref[i:] and hyp[j:]
	return distance_table(list(ref)[::-1], list(hyp)[::-1])[::-1, ::-1]


def align(ref, hyp):
	"""
	Zarovnanie s jednotkovými cenami, čítané od začiatku viet. Pri rovnosti
	cien má prednosť zhoda, potom substitúcia, vypustenie a nakoniec
	vloženie, takže substitúcie zostávajú na rovnakých pozíciách.
	"""
	table = suffix_table(ref, hyp)
	ops = []
	i = 0
	j = 0
	while i < len(ref) or j < len(hyp):
		current = table[i, j]
		if i < len(ref) and j < len(hyp) and ref[i] == hyp[j] and table[i + 1, j + 1] == current:
			ops.append(AlignmentOp(MATCH, ref[i], hyp[j]))
			i += 1
			j += 1
		elif i < len(ref) and j < len(hyp) and table[i + 1, j + 1] + 1 == current:
			ops.append(AlignmentOp(SUB, ref[i], hyp[j]))
			i += 1
			j += 1
		elif i < len(ref) and table[i + 1, j] + 1 == current:
			ops.append(AlignmentOp(DEL, ref[i], None))
			i += 1
		else:
			ops.append(AlignmentOp(INS, None, hyp[j]))
			j += 1
	return ops


def count_ops(ops):
	counts = {MATCH: 0, SUB: 0, DEL: 0, INS: 0}
	for op in ops:
		counts[op.kind] += 1
	return counts
