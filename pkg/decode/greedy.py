# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import numpy as np

from loss.masking import apply_mask
from tensor.core import Tensor


def ctc_greedy(log_probs, blank, excluded=()):
	"""
	Najpravdepodobnejší symbol v každom rámci, zlúčenie opakovaní a
	vynechanie blankov. Istota výstupného tokenu je maximum aposteriórnej
	pravdepodobnosti cez jeho zlúčené rámce. Symboly z `excluded` sa do
	argmaxu nedostanú.
	"""
	values = log_probs.values if isinstance(log_probs, Tensor) else np.asarray(log_probs, dtype=np.float64)
	excluded = [idx for idx in excluded if idx != blank]
	if excluded:
		values = values.copy()
		values[:, excluded] = -np.inf
	best = np.argmax(values, axis=-1)
	posteriors = np.exp(np.max(values, axis=-1))
	tokens = []
	confidences = []
	previous = None
	for symbol, posterior in zip(best, posteriors):
		symbol = int(symbol)
		if symbol == previous:
			if symbol != blank:
				confidences[-1] = max(confidences[-1], float(posterior))
			continue
		previous = symbol
		if symbol == blank:
			continue
		tokens.append(symbol)
		confidences.append(float(posterior))
	return tokens, confidences


def low_confidence_positions(confidences, threshold):
	return [pos for pos, confidence in enumerate(confidences) if confidence < threshold]


def masking_positions(tokens, confidences, threshold, mask_id):
	# a mask symbol emitted by CTC is never an observation
	emitted = [pos for pos, token in enumerate(tokens) if token == mask_id]
	return sorted(set(low_confidence_positions(confidences, threshold)) | set(emitted))


def mask_by_threshold(tokens, confidences, threshold, mask_id):
	if len(tokens) != len(confidences):
		raise ValueError("got %d tokens but %d confidences" % (len(tokens), len(confidences)))
	return apply_mask(tokens, masking_positions(tokens, confidences, threshold, mask_id), mask_id)
