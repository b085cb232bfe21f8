# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io
import json
from collections import OrderedDict

import numpy as np

from .exceptions import ContainerError
from .json_utils import dumps


MAGIC = b'MCCS1'
VERSION = 1
DTYPE = np.dtype('<f8')


def write_container(path, arrays, extra=None):
	"""
	Zapíše hlavičku a polia vo formáte MCCS1: magické bajty, kompaktná JSON
	hlavička ukončená novým riadkom a little-endian float64 dáta. Rovnaký
	formát používajú checkpointy aj súbory príznakov.
	"""
	entries = []
	payloads = []
	offset = 0
	for name, array in arrays.items():
		array = np.ascontiguousarray(array, dtype=DTYPE)
		entries.append({'name': name, 'shape': list(array.shape), 'offset': offset})
		payloads.append(array.tobytes())
		offset += array.nbytes
	header = dict(extra or {})
	header['version'] = VERSION
	header['arrays'] = entries
	with io.open(path, 'wb') as fp:
		fp.write(MAGIC)
		fp.write(dumps(header, separators=(',', ':')).encode('utf-8'))
		fp.write(b'\n')
		for payload in payloads:
			fp.write(payload)


def read_container(path):
	with io.open(path, 'rb') as fp:
		data = fp.read()
	if not data.startswith(MAGIC):
		raise ContainerError(path, "missing MCCS1 magic bytes")
	end = data.find(b'\n', len(MAGIC))
	if end < 0:
		raise ContainerError(path, "truncated header")
	try:
		header = json.loads(data[len(MAGIC):end].decode('utf-8'))
	except ValueError:
		raise ContainerError(path, "malformed header")
	if header.get('version') != VERSION:
		raise ContainerError(path, "unsupported version %r, expected %d" % (header.get('version'), VERSION))
	payload = data[end + 1:]
	arrays = OrderedDict()
	for entry in header.get('arrays', []):
		name = entry['name']
		shape = tuple(entry['shape'])
		start = entry['offset']
		size = int(np.prod(shape)) * DTYPE.itemsize
		if start + size > len(payload):
			raise ContainerError(path, "truncated data for array %s" % name, array=name)
		arrays[name] = np.frombuffer(payload[start:start + size], dtype=DTYPE).reshape(shape).copy()
	return header, arrays
