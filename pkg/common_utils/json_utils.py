# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io
import json

import numpy as np
from django.core.serializers.json import DjangoJSONEncoder
from django.utils.encoding import force_str


class ArrayJSONEncoder(DjangoJSONEncoder):
	def default(self, o): # pylint: disable=method-hidden
		if isinstance(o, np.ndarray):
			return o.tolist()
		if isinstance(o, np.integer):
			return int(o)
		if isinstance(o, np.floating):
			return float(o)
		if isinstance(o, (set, frozenset)):
			return sorted(o)
		return super(ArrayJSONEncoder, self).default(o)


def dumps(data, **kwargs):
	return force_str(json.dumps(data, cls=ArrayJSONEncoder, ensure_ascii=False, sort_keys=True, **kwargs))


def write_json_lines(path, records):
	with io.open(path, 'w', encoding='utf-8') as fp:
		for record in records:
			fp.write(dumps(record))
			fp.write('\n')


def append_json_line(path, record):
	with io.open(path, 'a', encoding='utf-8') as fp:
		fp.write(dumps(record))
		fp.write('\n')


def read_json_lines(path):
	"""
	Vráti zoznam dvojíc (číslo riadku, záznam). Prázdne riadky sa preskakujú.
	"""
	records = []
	with io.open(path, 'r', encoding='utf-8') as fp:
		for lineno, line in enumerate(fp, 1):
			line = line.strip()
			if not line:
				continue
			records.append((lineno, json.loads(line)))
	return records


def read_json(path):
	with io.open(path, 'r', encoding='utf-8') as fp:
		return json.load(fp)


def write_json(path, data):
	with io.open(path, 'w', encoding='utf-8') as fp:
		fp.write(dumps(data, indent='\t'))
		fp.write('\n')
