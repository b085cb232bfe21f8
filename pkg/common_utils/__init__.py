# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import hashlib
import logging
import os


logger = logging.getLogger('codeswitch')


def ensure_dir(path):
	if path and not os.path.isdir(path):
		os.makedirs(path)
	return path


def file_sha1(path):
	digest = hashlib.sha1()
	with open(path, 'rb') as fp:
		for chunk in iter(lambda: fp.read(65536), b''):
			digest.update(chunk)
	return digest.hexdigest()
