# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io
import json
import os
from collections import namedtuple, OrderedDict

from .exceptions import ManifestError
from common_utils import logger
from common_utils.container import write_container, read_container
from common_utils.exceptions import ContainerError
from common_utils.json_utils import write_json_lines
from vocab.vocabulary import tokenize


FEATURES_ARRAY = 'feats'

ManifestRecord = namedtuple('ManifestRecord', ['utt_id', 'text', 'feats_path', 'num_frames'])


def write_features(path, features):
	write_container(path, OrderedDict([(FEATURES_ARRAY, features)]))


def read_features(path):
	__, arrays = read_container(path)
	if FEATURES_ARRAY not in arrays:
		raise ContainerError(path, "array %s is missing" % FEATURES_ARRAY, array=FEATURES_ARRAY)
	features = arrays[FEATURES_ARRAY]
	if features.ndim != 2:
		raise ContainerError(path, "features have shape %s, expected a matrix" % (features.shape,), array=FEATURES_ARRAY)
	return features


class Manifest(object):
	"""
	Zoznam viet korpusu. Cesty k príznakom sú relatívne k adresáru
	manifestu.
	"""

	def __init__(self, records=(), root=''):
		self.root = root
		self.records = []
		self.index = {}
		for record in records:
			self.add(record)

	def add(self, record, lineno=0):
		if record.utt_id in self.index:
			raise ManifestError(self.root or '-', lineno, "duplicate utterance id %s" % record.utt_id)
		self.index[record.utt_id] = record
		self.records.append(record)

	def __len__(self):
		return len(self.records)

	def __iter__(self):
		return iter(self.records)

	def __contains__(self, utt_id):
		return utt_id in self.index

	def __getitem__(self, utt_id):
		return self.index[utt_id]

	def __eq__(self, other):
		return isinstance(other, Manifest) and self.records == other.records

	def __ne__(self, other):
		return not self == other

	def features_path(self, record):
		if os.path.isabs(record.feats_path):
			return record.feats_path
		return os.path.join(self.root, record.feats_path)

	def load_features(self, record):
		return read_features(self.features_path(record))

	def tokens(self):
		return OrderedDict((record.utt_id, tokenize(record.text)) for record in self.records)

	def texts(self):
		return [record.text for record in self.records]

	def items(self):
		for record in self.records:
			yield record.utt_id, self.load_features(record)


def write_manifest(manifest, path):
	write_json_lines(path, (record._asdict() for record in manifest))


def parse_record(data, path, lineno):
	if not isinstance(data, dict):
		raise ManifestError(path, lineno, "expected a JSON object")
	missing = [field for field in ManifestRecord._fields if field not in data]
	if missing:
		raise ManifestError(path, lineno, "missing field %s" % ', '.join(missing))
	for field in ('utt_id', 'text', 'feats_path'):
		if not isinstance(data[field], str):
			raise ManifestError(path, lineno, "field %s must be a string" % field)
	num_frames = data['num_frames']
	if isinstance(num_frames, bool) or not isinstance(num_frames, int) or num_frames < 1:
		raise ManifestError(path, lineno, "num_frames must be a positive integer")
	return ManifestRecord(*(data[field] for field in ManifestRecord._fields))


def read_manifest(path, check_files=True):
	manifest = Manifest(root=os.path.dirname(os.path.abspath(path)))
	with io.open(path, 'r', encoding='utf-8') as fp:
		for lineno, line in enumerate(fp, 1):
			line = line.strip()
			if not line:
				continue
			try:
				data = json.loads(line)
			except ValueError as e:
				raise ManifestError(path, lineno, "malformed JSON (%s)" % e)
			record = parse_record(data, path, lineno)
			if record.utt_id in manifest:
				raise ManifestError(path, lineno, "duplicate utterance id %s" % record.utt_id)
			if check_files and not os.path.isfile(manifest.features_path(record)):
				raise ManifestError(path, lineno, "features file %s does not exist" % record.feats_path)
			manifest.add(record, lineno)
	if not manifest.records:
		logger.warning("manifest %s is empty", path)
	return manifest
