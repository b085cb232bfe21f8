# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import os
import shutil
import tempfile
import unittest

import numpy as np


class TemporaryDirectoryMixin(object):
	def setUp(self):
		super(TemporaryDirectoryMixin, self).setUp()
		self.tmp_dir = tempfile.mkdtemp(prefix='codeswitch-test-')

	def tearDown(self):
		shutil.rmtree(self.tmp_dir, ignore_errors=True)
		super(TemporaryDirectoryMixin, self).tearDown()

	def tmp_path(self, *parts):
		return os.path.join(self.tmp_dir, *parts)


class ArrayAssertMixin(object):
	def assertArrayClose(self, actual, expected, atol=1e-10, rtol=0.0):
		actual = np.asarray(actual, dtype=np.float64)
		expected = np.asarray(expected, dtype=np.float64)
		self.assertEqual(actual.shape, expected.shape)
		if not np.allclose(actual, expected, atol=atol, rtol=rtol):
			diff = np.max(np.abs(actual - expected))
			self.fail("arrays differ, max abs difference %g" % diff)

	def assertArrayEqual(self, actual, expected):
		actual = np.asarray(actual)
		expected = np.asarray(expected)
		self.assertEqual(actual.shape, expected.shape)
		self.assertTrue(np.array_equal(actual, expected))


class GradCheckMixin(object):
	def assertGradCheck(self, fn, x, bound=1e-5, h=1e-5, min_magnitude=0.0):
		from tensor.gradcheck import grad_check
		error = grad_check(fn, x, h=h, min_magnitude=min_magnitude)
		self.assertLess(error, bound, "relative gradient error %g" % error)
		return error


def replication_test(cls):
	"""
	Dlhé trénovacie behy sa spúšťajú len s premennou prostredia
	RUN_REPLICATION_TESTS.
	"""
	if 'RUN_REPLICATION_TESTS' not in os.environ:
		return unittest.skip("set RUN_REPLICATION_TESTS to run desk-scale training")(cls)
	return cls
