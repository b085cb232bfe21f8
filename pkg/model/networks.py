# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import math

import numpy as np

from .layers import Module, Linear, LayerNorm, Dropout, EncoderLayer, DecoderLayer, positional_encoding
from common_utils.exceptions import ConfigError, CompatibilityError
from tensor import ops
from tensor.core import Tensor
from tensor.exceptions import ShapeError


CTC_ONLY = 'ctc_only'
MASK_CTC = 'mask_ctc'
MASK_CTC_P2M = 'mask_ctc_p2m'
MASK_CTC_M2M = 'mask_ctc_m2m'
ARCHITECTURES = (CTC_ONLY, MASK_CTC, MASK_CTC_P2M, MASK_CTC_M2M)
INTERMEDIATE_ARCHITECTURES = (MASK_CTC_P2M, MASK_CTC_M2M)

MATREG_NONE = 'none'
MATREG_CTC_CMLM = 'ctc_cmlm'
MATREG_P2M_CMLM = 'p2m_cmlm'
MATREG_PAIRS = (MATREG_NONE, MATREG_CTC_CMLM, MATREG_P2M_CMLM)


class EncoderConfig(object):
	def __init__(self, input_dim, model_dim=64, num_layers=2, num_heads=4, ff_dim=256, subsample_factor=4, dropout=0.1):
		if model_dim % num_heads != 0:
			raise ConfigError("model_dim %d is not divisible by num_heads %d" % (model_dim, num_heads))
		if subsample_factor < 1:
			raise ConfigError("subsample_factor must be at least 1")
		if input_dim < 1:
			raise ConfigError("input_dim must be at least 1")
		if not 0.0 <= dropout < 1.0:
			raise ConfigError("dropout must be in [0, 1)")
		self.input_dim = int(input_dim)
		self.model_dim = int(model_dim)
		self.num_layers = int(num_layers)
		self.num_heads = int(num_heads)
		self.ff_dim = int(ff_dim)
		self.subsample_factor = int(subsample_factor)
		self.dropout = float(dropout)

	def to_dict(self):
		return {
			'input_dim': self.input_dim,
			'model_dim': self.model_dim,
			'num_layers': self.num_layers,
			'num_heads': self.num_heads,
			'ff_dim': self.ff_dim,
			'subsample_factor': self.subsample_factor,
			'dropout': self.dropout,
		}


def default_matreg_pair(architecture):
	if architecture == MASK_CTC:
		return MATREG_CTC_CMLM
	if architecture in INTERMEDIATE_ARCHITECTURES:
		return MATREG_P2M_CMLM
	return MATREG_NONE


class ModelConfig(object):
	def __init__(self, architecture, encoder, num_cmlm_layers=2, num_p2m_layers=1, tie_ctc_embedding=False, matreg_pair=None, seed=0):
		if architecture not in ARCHITECTURES:
			raise ConfigError("unknown architecture %r" % architecture)
		if matreg_pair is None:
			matreg_pair = default_matreg_pair(architecture)
		if matreg_pair not in MATREG_PAIRS:
			raise ConfigError("unknown matreg pair %r" % matreg_pair)
		if tie_ctc_embedding and architecture not in (MASK_CTC, MASK_CTC_M2M):
			raise ConfigError("weight tying needs a character-level CTC vocabulary, architecture %s has none" % architecture)
		self.architecture = architecture
		self.encoder = encoder
		self.num_cmlm_layers = int(num_cmlm_layers)
		self.num_p2m_layers = int(num_p2m_layers)
		self.tie_ctc_embedding = bool(tie_ctc_embedding)
		self.matreg_pair = matreg_pair
		self.seed = int(seed)

	def to_dict(self):
		return {
			'architecture': self.architecture,
			'encoder': self.encoder.to_dict(),
			'num_cmlm_layers': self.num_cmlm_layers,
			'num_p2m_layers': self.num_p2m_layers,
			'tie_ctc_embedding': self.tie_ctc_embedding,
			'matreg_pair': self.matreg_pair,
			'seed': self.seed,
		}

	@classmethod
	def from_dict(cls, data):
		data = dict(data)
		data['encoder'] = EncoderConfig(**data['encoder'])
		return cls(**data)


class Encoder(Module):
	def __init__(self, rng, cfg, vocab_size):
		super(Encoder, self).__init__()
		self.cfg = cfg
		self.front = self.child('front', Linear(rng, cfg.input_dim * cfg.subsample_factor, cfg.model_dim))
		self.layers = [
			self.child('layer%d' % idx, EncoderLayer(rng, cfg.model_dim, cfg.num_heads, cfg.ff_dim, cfg.dropout))
			for idx in range(cfg.num_layers)
		]
		self.final_norm = self.child('final_norm', LayerNorm(cfg.model_dim))
		self.ctc = self.child('ctc', Linear(rng, cfg.model_dim, vocab_size))
		self.dropout = Dropout(cfg.dropout)

	def stack_frames(self, features):
		features = np.asarray(features, dtype=np.float64)
		if features.ndim != 2 or features.shape[1] != self.cfg.input_dim:
			raise ShapeError("features of shape %s do not match input_dim %d" % (features.shape, self.cfg.input_dim))
		frames = features.shape[0]
		if frames == 0:
			raise ShapeError("empty feature matrix")
		factor = self.cfg.subsample_factor
		steps = int(math.ceil(frames / float(factor)))
		padded = np.zeros((steps * factor, self.cfg.input_dim))
		padded[:frames] = features
		return padded.reshape(steps, factor * self.cfg.input_dim)

	def __call__(self, features, rng=None):
		stacked = self.stack_frames(features)
		x = ops.add(self.front(Tensor(stacked)), positional_encoding(stacked.shape[0], self.cfg.model_dim))
		x = self.dropout(x, rng)
		for layer in self.layers:
			x = layer(x, rng)
		hidden = self.final_norm(x)
		return hidden, ops.log_softmax(self.ctc(hidden))


class Decoder(Module):
	"""
	Nemaskovaný (obojsmerný) dekodér nad maskovanou postupnosťou. Slúži ako
	P2M aj ako CMLM; líšia sa len vstupným slovníkom a počtom vrstiev.
	"""

	def __init__(self, rng, cfg, num_layers, input_size, output_size, tied_embedding=None):
		super(Decoder, self).__init__()
		self.cfg = cfg
		self.output_size = output_size
		self.tied_embedding = tied_embedding
		if tied_embedding is None:
			self.embedding = self.param('embedding', rng.normal(size=(input_size, cfg.model_dim)))
		self.layers = [
			self.child('layer%d' % idx, DecoderLayer(rng, cfg.model_dim, cfg.num_heads, cfg.ff_dim, cfg.dropout))
			for idx in range(num_layers)
		]
		self.final_norm = self.child('final_norm', LayerNorm(cfg.model_dim))
		self.output = self.child('output', Linear(rng, cfg.model_dim, output_size))
		self.dropout = Dropout(cfg.dropout)

	def embedding_matrix(self):
		if self.tied_embedding is not None:
			return self.tied_embedding()
		return self.embedding

	def __call__(self, ids, hidden, rng=None):
		ids = list(getattr(ids, 'ids', ids))
		if not ids:
			return Tensor(np.zeros((0, self.output_size)))
		x = ops.embed_lookup(self.embedding_matrix(), ids)
		x = self.dropout(ops.add(x, positional_encoding(len(ids), self.cfg.model_dim)), rng)
		for layer in self.layers:
			x = layer(x, hidden, rng)
		return self.output(self.final_norm(x))


class ModelBundle(Module):
	def __init__(self, config, char_vocab, pinyin_vocab):
		super(ModelBundle, self).__init__()
		self.config = config
		self.char_vocab = char_vocab
		self.pinyin_vocab = pinyin_vocab
		rng = np.random.default_rng(config.seed)
		enc = config.encoder
		self.encoder = self.child('encoder', Encoder(rng, enc, len(self.ctc_vocab)))
		self.p2m = None
		self.cmlm = None
		if config.architecture in INTERMEDIATE_ARCHITECTURES:
			self.p2m = self.child('p2m', Decoder(rng, enc, config.num_p2m_layers, len(self.ctc_vocab), len(char_vocab)))
		if config.architecture != CTC_ONLY:
			tied = self.tied_ctc_embedding if config.tie_ctc_embedding else None
			self.cmlm = self.child('cmlm', Decoder(rng, enc, config.num_cmlm_layers, len(char_vocab), len(char_vocab), tied))

	@property
	def architecture(self):
		return self.config.architecture

	@property
	def ctc_vocab(self):
		if self.config.architecture == MASK_CTC_P2M:
			return self.pinyin_vocab
		return self.char_vocab

	@property
	def w_ctc(self):
		return self.encoder.ctc.weight

	def tied_ctc_embedding(self):
		return ops.transpose(self.encoder.ctc.weight)

	def encoder_forward(self, features, rng=None):
		return self.encoder(features, rng)

	def p2m_forward(self, masked, hidden, rng=None):
		if self.p2m is None:
			raise CompatibilityError("architecture %s has no P2M decoder" % self.architecture)
		return self.p2m(masked, hidden, rng)

	def cmlm_forward(self, masked, hidden, rng=None):
		if self.cmlm is None:
			raise CompatibilityError("architecture %s has no CMLM decoder" % self.architecture)
		return self.cmlm(masked, hidden, rng)

	def matreg_pair(self):
		"""
		Dvojica matíc d×|V| pre regularizáciu, alebo None.
		"""
		pair = self.config.matreg_pair
		if pair == MATREG_NONE or self.cmlm is None:
			return None
		w_emb = ops.transpose(self.cmlm.embedding_matrix())
		if pair == MATREG_CTC_CMLM:
			w_a = self.w_ctc
		else:
			if self.p2m is None:
				raise ConfigError("matreg pair %s needs a P2M decoder" % pair)
			w_a = self.p2m.output.weight
		if w_a.shape != w_emb.shape:
			raise ConfigError("matreg pair %s has incompatible shapes %s and %s" % (pair, w_a.shape, w_emb.shape))
		return w_a, w_emb
