# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import numpy as np

from loss.masking import MaskedSequence
from tensor.core import Tensor
from tensor.primitives import log_softmax


def iteration_schedule(num_masked, iterations):
	if num_masked < 0 or iterations < 1:
		raise ValueError("invalid schedule request n=%d K=%d" % (num_masked, iterations))
	if num_masked == 0:
		return []
	step = num_masked // iterations
	return [step] * (iterations - 1) + [num_masked - step * (iterations - 1)]


def restricted_posteriors(logits, excluded):
	"""
	Aposteriórne pravdepodobnosti po vylúčení zakázaných tokenov (maska,
	blank) z domény argmaxu.
	"""
	values = logits.values if isinstance(logits, Tensor) else np.asarray(logits, dtype=np.float64)
	values = values.copy()
	values[:, list(excluded)] = -np.inf
	return np.exp(log_softmax(values))


def cmlm_refine(bundle, masked, hidden, iterations, excluded=None):
	"""
	Iteratívne dopĺňanie maskovaných pozícií. Vráti trojicu (identifikátory,
	istoty doplnených pozícií, pozície doplnené v jednotlivých iteráciách).
	Doplnená pozícia sa už nikdy nemení.
	"""
	vocab = bundle.char_vocab
	if excluded is None:
		excluded = (vocab.mask, vocab.blank)
	if not isinstance(masked, MaskedSequence):
		masked = MaskedSequence(masked, [], vocab.mask)
	confidences = {}
	history = []
	for count in iteration_schedule(len(masked.mask_positions), iterations):
		if count == 0:
			history.append([])
			continue
		probs = restricted_posteriors(bundle.cmlm_forward(masked, hidden), excluded)
		remaining = np.asarray(masked.mask_positions)
		best = np.argmax(probs[remaining], axis=-1)
		scores = probs[remaining, best]
		# highest posterior first, earlier position on ties
		order = np.lexsort((remaining, -scores))[:count]
		assignments = {}
		for idx in order:
			pos = int(remaining[idx])
			assignments[pos] = int(best[idx])
			confidences[pos] = float(scores[idx])
		masked = masked.fill(assignments)
		history.append(sorted(assignments))
	return list(masked.ids), confidences, history
