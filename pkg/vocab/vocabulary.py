# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import io
import re
from collections import OrderedDict

from .exceptions import VocabularyError, PinyinCoverageError


MAN_CHAR = 'MAN_CHAR'
PINYIN = 'PINYIN'
ENG = 'ENG'
SPECIAL = 'SPECIAL'

LANG_TAGS = (MAN_CHAR, PINYIN, ENG, SPECIAL)

BLANK = '<blank>'
UNK = '<unk>'
MASK = '<mask>'
NOISE = '<noise>'

SPECIAL_TOKENS = (BLANK, UNK, MASK, NOISE)

PINYIN_RX = re.compile(r'^[a-z]+[0-9]?$')
CJK_RX = re.compile('[\u3400-\u4dbf\u4e00-\u9fff\uf900-\ufaff]')
CJK_SPLIT_RX = re.compile('([\u3400-\u4dbf\u4e00-\u9fff\uf900-\ufaff])')


def is_cjk(token):
	return len(token) == 1 and CJK_RX.match(token) is not None


def guess_tag(token):
	if token in SPECIAL_TOKENS:
		return SPECIAL
	if is_cjk(token):
		return MAN_CHAR
	return ENG


def tokenize(text):
	tokens = []
	for chunk in text.split():
		for piece in CJK_SPLIT_RX.split(chunk):
			if piece:
				tokens.append(piece)
	return tokens


def detokenize(tokens):
	parts = []
	previous = None
	for token in tokens:
		if previous is not None and not (is_cjk(previous) and is_cjk(token)):
			parts.append(' ')
		parts.append(token)
		previous = token
	return ''.join(parts)


def composition(token_lists, tag_of=guess_tag):
	"""
	Podiel viet len po mandarínsky, len po anglicky a s prepínaním jazyka.
	"""
	result = OrderedDict([('mandarin', 0), ('english', 0), ('code_switching', 0)])
	total = 0
	for tokens in token_lists:
		tags = set(tag_of(token) for token in tokens)
		if MAN_CHAR in tags and ENG in tags:
			result['code_switching'] += 1
		elif MAN_CHAR in tags:
			result['mandarin'] += 1
		elif ENG in tags:
			result['english'] += 1
		else:
			continue
		total += 1
	if total:
		for key in result:
			result[key] = result[key] / float(total)
	return result


class Vocabulary(object):
	def __init__(self, tokens, tags):
		tokens = list(tokens)
		tags = list(tags)
		if len(tokens) != len(tags):
			raise VocabularyError("got %d tokens but %d tags" % (len(tokens), len(tags)))
		self.tokens = tokens
		self.tags = tags
		self.id_of = {}
		for idx, (token, tag) in enumerate(zip(tokens, tags)):
			if token in self.id_of:
				raise VocabularyError("duplicate token %r" % token)
			self.check_token(token, tag)
			self.id_of[token] = idx
		for token in SPECIAL_TOKENS:
			if token not in self.id_of:
				raise VocabularyError("special token %s missing" % token)
		self.blank = self.id_of[BLANK]
		self.unk = self.id_of[UNK]
		self.mask = self.id_of[MASK]
		self.noise = self.id_of[NOISE]

	@staticmethod
	def check_token(token, tag):
		if tag not in LANG_TAGS:
			raise VocabularyError("unknown language tag %r for %r" % (tag, token))
		if (token in SPECIAL_TOKENS) != (tag == SPECIAL):
			raise VocabularyError("token %r cannot be tagged %s" % (token, tag))
		if tag == MAN_CHAR and len(token) != 1:
			raise VocabularyError("mandarin token %r is not a single character" % token)
		if tag == PINYIN and not PINYIN_RX.match(token):
			raise VocabularyError("%r is not a pinyin token" % token)
		if not token or any(ch.isspace() for ch in token):
			raise VocabularyError("invalid token %r" % token)

	def __len__(self):
		return len(self.tokens)

	def __contains__(self, token):
		return token in self.id_of

	def __getitem__(self, idx):
		return self.tokens[idx]

	def __eq__(self, other):
		return isinstance(other, Vocabulary) and self.tokens == other.tokens and self.tags == other.tags

	def __ne__(self, other):
		return not self == other

	def __repr__(self):
		return '<Vocabulary %d tokens>' % len(self)

	def tag(self, idx):
		return self.tags[idx]

	def tag_of_token(self, token):
		idx = self.id_of.get(token)
		if idx is None:
			return guess_tag(token)
		return self.tags[idx]

	def ids_with_tag(self, tag):
		return [idx for idx, t in enumerate(self.tags) if t == tag]

	@property
	def special_ids(self):
		return (self.blank, self.unk, self.mask, self.noise)

	def encode(self, tokens):
		return [self.id_of.get(token, self.unk) for token in tokens]

	def decode(self, ids):
		size = len(self.tokens)
		for idx in ids:
			if idx < 0 or idx >= size:
				raise VocabularyError("token id %d out of range 0..%d" % (idx, size - 1))
		return [self.tokens[idx] for idx in ids]

	def to_dict(self):
		return [[token, tag] for token, tag in zip(self.tokens, self.tags)]

	@classmethod
	def from_dict(cls, data):
		return cls([row[0] for row in data], [row[1] for row in data])

	def save(self, path):
		with io.open(path, 'w', encoding='utf-8') as fp:
			for token, tag in zip(self.tokens, self.tags):
				fp.write('%s\t%s\n' % (token, tag))

	@classmethod
	def load(cls, path):
		tokens = []
		tags = []
		with io.open(path, 'r', encoding='utf-8') as fp:
			for lineno, line in enumerate(fp, 1):
				line = line.rstrip('\n')
				if not line:
					continue
				parts = line.split('\t')
				if len(parts) != 2:
					raise VocabularyError("%s:%d: expected token<TAB>tag" % (path, lineno))
				tokens.append(parts[0])
				tags.append(parts[1])
		return cls(tokens, tags)


def build_vocab(corpus_lines, pinyin_table):
	man_chars = set()
	eng_words = set()
	for line in corpus_lines:
		for token in tokenize(line):
			tag = guess_tag(token)
			if tag == MAN_CHAR:
				if token not in pinyin_table:
					raise PinyinCoverageError(token)
				man_chars.add(token)
			elif tag == ENG:
				eng_words.add(token)

	pinyin_tokens = set(pinyin_table[char] for char in man_chars)
	collisions = pinyin_tokens & eng_words
	if collisions:
		raise VocabularyError("english words collide with pinyin tokens: %s" % ', '.join(sorted(collisions)))

	specials = list(SPECIAL_TOKENS)
	man_chars = sorted(man_chars)
	eng_words = sorted(eng_words)
	pinyin_tokens = sorted(pinyin_tokens)

	char_vocab = Vocabulary(
		specials + man_chars + eng_words,
		[SPECIAL] * len(specials) + [MAN_CHAR] * len(man_chars) + [ENG] * len(eng_words)
	)
	pinyin_vocab = Vocabulary(
		specials + pinyin_tokens + eng_words,
		[SPECIAL] * len(specials) + [PINYIN] * len(pinyin_tokens) + [ENG] * len(eng_words)
	)
	return char_vocab, pinyin_vocab
