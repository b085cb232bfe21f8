# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io
from collections import OrderedDict

from .exceptions import VocabularyError, PinyinCoverageError
from .vocabulary import MAN_CHAR, PINYIN_RX, is_cjk


class PinyinTable(object):
	"""
	Zobrazenie znak -> pinyin. Pri viacerých výslovnostiach platí prvá
	uvedená, takže tabuľka je vždy funkcia.
	"""

	def __init__(self, pairs=()):
		self.mapping = OrderedDict()
		for char, pinyin in pairs:
			self.add(char, pinyin)

	def add(self, char, pinyin):
		if not is_cjk(char):
			raise VocabularyError("%r is not a single CJK character" % char)
		if not PINYIN_RX.match(pinyin):
			raise VocabularyError("%r is not a pinyin token" % pinyin)
		self.mapping.setdefault(char, pinyin)

	def __contains__(self, char):
		return char in self.mapping

	def __getitem__(self, char):
		try:
			return self.mapping[char]
		except KeyError:
			raise PinyinCoverageError(char)

	def __len__(self):
		return len(self.mapping)

	def __eq__(self, other):
		return isinstance(other, PinyinTable) and list(self.mapping.items()) == list(other.mapping.items())

	def __ne__(self, other):
		return not self == other

	def chars(self):
		return list(self.mapping.keys())

	def homophones(self):
		groups = {}
		for char, pinyin in self.mapping.items():
			groups.setdefault(pinyin, []).append(char)
		return {pinyin: sorted(chars) for pinyin, chars in groups.items()}

	def save(self, path):
		with io.open(path, 'w', encoding='utf-8') as fp:
			for char, pinyin in self.mapping.items():
				fp.write('%s\t%s\n' % (char, pinyin))

	@classmethod
	def load(cls, path):
		table = cls()
		with io.open(path, 'r', encoding='utf-8') as fp:
			for lineno, line in enumerate(fp, 1):
				line = line.strip()
				if not line:
					continue
				parts = line.split('\t')
				if len(parts) != 2:
					raise VocabularyError("%s:%d: expected CHAR<TAB>pinyin" % (path, lineno))
				table.add(parts[0], parts[1])
		return table


def tokens_to_pinyin(tokens, table):
	return [table[token] if is_cjk(token) else token for token in tokens]


def to_pinyin(char_ids, table, char_vocab, pinyin_vocab):
	pinyin_ids = []
	for idx in char_ids:
		token = char_vocab[idx]
		if char_vocab.tag(idx) == MAN_CHAR:
			token = table[token]
		try:
			pinyin_ids.append(pinyin_vocab.id_of[token])
		except KeyError:
			raise VocabularyError("token %r missing from pinyin vocabulary" % token)
	return pinyin_ids
