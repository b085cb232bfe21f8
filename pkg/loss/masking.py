# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from .exceptions import LossError


class MaskedSequence(object):
	"""
	Postupnosť identifikátorov s explicitnou množinou maskovaných pozícií.
	Na maskovaných pozíciách je vždy identifikátor masky.
	"""

	def __init__(self, ids, mask_positions, mask_id):
		ids = [int(idx) for idx in ids]
		positions = sorted(set(int(pos) for pos in mask_positions))
		for pos in positions:
			if pos < 0 or pos >= len(ids):
				raise LossError("mask position %d out of range for length %d" % (pos, len(ids)))
			if ids[pos] != mask_id:
				raise LossError("position %d is masked but holds id %d" % (pos, ids[pos]))
		self.ids = ids
		self.mask_positions = positions
		self.mask_id = mask_id

	def __len__(self):
		return len(self.ids)

	def __eq__(self, other):
		return (
			isinstance(other, MaskedSequence) and
			self.ids == other.ids and
			self.mask_positions == other.mask_positions and
			self.mask_id == other.mask_id
		)

	def __ne__(self, other):
		return not self == other

	def __repr__(self):
		return '<MaskedSequence %r masked=%r>' % (self.ids, self.mask_positions)

	@property
	def observed_positions(self):
		masked = set(self.mask_positions)
		return [pos for pos in range(len(self.ids)) if pos not in masked]

	def fill(self, assignments):
		ids = list(self.ids)
		remaining = set(self.mask_positions)
		for pos, token in assignments.items():
			if pos not in remaining:
				raise LossError("position %d is not masked" % pos)
			if token == self.mask_id:
				raise LossError("cannot fill position %d with the mask id" % pos)
			ids[pos] = int(token)
			remaining.discard(pos)
		return MaskedSequence(ids, remaining, self.mask_id)


def sample_mask(length, rng):
	if length <= 0:
		return []
	count = int(rng.integers(1, length + 1))
	positions = rng.choice(length, size=count, replace=False)
	return sorted(int(pos) for pos in positions)


def apply_mask(ids, mask_positions, mask_id):
	masked = list(ids)
	for pos in mask_positions:
		if pos < 0 or pos >= len(masked):
			raise LossError("mask position %d out of range for length %d" % (pos, len(masked)))
		masked[pos] = mask_id
	return MaskedSequence(masked, mask_positions, mask_id)
