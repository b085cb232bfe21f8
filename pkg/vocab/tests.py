# -*- coding: utf-8 -*-
from __future__ import unicode_literals

from django.test import SimpleTestCase

from .exceptions import VocabularyError, PinyinCoverageError
from .pinyin import PinyinTable, to_pinyin, tokens_to_pinyin
from .vocabulary import Vocabulary, build_vocab, tokenize, detokenize, composition, MAN_CHAR, PINYIN, ENG, SPECIAL, SPECIAL_TOKENS
from common_utils.tests_common import TemporaryDirectoryMixin


class TokenizeTest(SimpleTestCase):
	def test_mixed(self):
		self.assertEqual(tokenize("我很happy"), ["我", "很", "happy"])

	def test_english(self):
		self.assertEqual(tokenize("happy day"), ["happy", "day"])

	def test_spaces_between(self):
		self.assertEqual(tokenize("我 happy 很"), ["我", "happy", "很"])

	def test_noise_token(self):
		self.assertEqual(tokenize("<noise> 我们"), ["<noise>", "我", "们"])

	def test_round_trip(self):
		text = "我很 happy today 你好"
		self.assertEqual(tokenize(detokenize(tokenize(text))), tokenize(text))
		self.assertEqual(detokenize(tokenize(text)), "我很 happy today 你好")


class CompositionTest(SimpleTestCase):
	def test_fractions(self):
		result = composition([["我", "很"], ["happy"], ["我", "happy"], ["<noise>"], ["好", "day"]])
		self.assertEqual(result['mandarin'], 0.25)
		self.assertEqual(result['english'], 0.25)
		self.assertEqual(result['code_switching'], 0.5)


class BuildVocabTest(SimpleTestCase):
	def setUp(self):
		self.table = PinyinTable([("我", "wo"), ("很", "hen"), ("狠", "hen")])

	def test_pinyin_vocab(self):
		char_vocab, pinyin_vocab = build_vocab(["我很happy"], self.table)
		self.assertIn("wo", pinyin_vocab)
		self.assertIn("hen", pinyin_vocab)
		self.assertIn("happy", pinyin_vocab)
		self.assertIn("我", char_vocab)
		self.assertEqual(pinyin_vocab.tag_of_token("wo"), PINYIN)
		self.assertEqual(char_vocab.tag_of_token("我"), MAN_CHAR)

	def test_homophones_collapse(self):
		char_vocab, pinyin_vocab = build_vocab(["我很 狠"], self.table)
		self.assertEqual(pinyin_vocab.tokens.count("hen"), 1)
		self.assertLess(len(pinyin_vocab), len(char_vocab))

	def test_english_only(self):
		char_vocab, pinyin_vocab = build_vocab(["happy day", "good day"], self.table)
		self.assertEqual(char_vocab.tokens, pinyin_vocab.tokens)
		self.assertEqual(char_vocab.tags, pinyin_vocab.tags)

	def test_uncovered_character(self):
		with self.assertRaises(PinyinCoverageError) as ctx:
			build_vocab(["我们"], self.table)
		self.assertIn("们", str(ctx.exception))

	def test_specials(self):
		char_vocab, __ = build_vocab(["我"], self.table)
		ids = set(char_vocab.special_ids)
		self.assertEqual(len(ids), 4)
		for idx in ids:
			self.assertEqual(char_vocab.tag(idx), SPECIAL)

	def test_deterministic(self):
		first = build_vocab(["我很happy", "day 我"], self.table)
		second = build_vocab(["我很happy", "day 我"], self.table)
		self.assertEqual(first, second)

	def test_dense_ids(self):
		char_vocab, __ = build_vocab(["我很happy"], self.table)
		self.assertEqual(sorted(char_vocab.id_of.values()), list(range(len(char_vocab))))

	def test_collision_rejected(self):
		with self.assertRaises(VocabularyError):
			build_vocab(["我 wo"], self.table)


class VocabularyTest(TemporaryDirectoryMixin, SimpleTestCase):
	def test_invalid_tags(self):
		specials = list(SPECIAL_TOKENS)
		with self.assertRaises(VocabularyError):
			Vocabulary(specials + ["ab"], [SPECIAL] * 4 + [MAN_CHAR])
		with self.assertRaises(VocabularyError):
			Vocabulary(specials + ["Hen"], [SPECIAL] * 4 + [PINYIN])
		with self.assertRaises(VocabularyError):
			Vocabulary(specials + ["x", "x"], [SPECIAL] * 4 + [ENG, ENG])
		with self.assertRaises(VocabularyError):
			Vocabulary(["x"], [ENG])

	def test_encode_unknown(self):
		vocab = Vocabulary(list(SPECIAL_TOKENS) + ["happy"], [SPECIAL] * 4 + [ENG])
		self.assertEqual(vocab.encode(["happy", "sad"]), [4, vocab.unk])

	def test_decode_out_of_range(self):
		vocab = Vocabulary(list(SPECIAL_TOKENS), [SPECIAL] * 4)
		with self.assertRaises(VocabularyError):
			vocab.decode([7])

	def test_file_round_trip(self):
		char_vocab, __ = build_vocab(["我很happy"], PinyinTable([("我", "wo"), ("很", "hen")]))
		char_vocab.save(self.tmp_path("vocab.txt"))
		self.assertEqual(Vocabulary.load(self.tmp_path("vocab.txt")), char_vocab)


class PinyinTest(TemporaryDirectoryMixin, SimpleTestCase):
	def setUp(self):
		super(PinyinTest, self).setUp()
		self.table = PinyinTable([("我", "wo"), ("很", "hen"), ("狠", "hen")])
		self.char_vocab, self.pinyin_vocab = build_vocab(["我很狠happy"], self.table)

	def encode(self, tokens):
		return self.char_vocab.encode(tokens)

	def test_to_pinyin(self):
		ids = to_pinyin(self.encode(["我", "很", "happy"]), self.table, self.char_vocab, self.pinyin_vocab)
		self.assertEqual(self.pinyin_vocab.decode(ids), ["wo", "hen", "happy"])

	def test_empty(self):
		self.assertEqual(to_pinyin([], self.table, self.char_vocab, self.pinyin_vocab), [])

	def test_homophones(self):
		ids = to_pinyin(self.encode(["狠", "很"]), self.table, self.char_vocab, self.pinyin_vocab)
		self.assertEqual(self.pinyin_vocab.decode(ids), ["hen", "hen"])

	def test_length_preserved(self):
		ids = self.encode(["我", "<noise>", "很", "happy", "狠"])
		self.assertEqual(len(to_pinyin(ids, self.table, self.char_vocab, self.pinyin_vocab)), len(ids))

	def test_polyphonic_first_wins(self):
		table = PinyinTable([("行", "xing"), ("行", "hang")])
		self.assertEqual(table["行"], "xing")

	def test_uncovered(self):
		with self.assertRaises(PinyinCoverageError):
			tokens_to_pinyin(["们"], self.table)

	def test_file_round_trip(self):
		self.table.save(self.tmp_path("table.tsv"))
		self.assertEqual(PinyinTable.load(self.tmp_path("table.tsv")), self.table)

	def test_homophone_groups(self):
		self.assertEqual(self.table.homophones()["hen"], sorted(["很", "狠"]))
