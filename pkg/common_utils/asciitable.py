# -*- coding: utf-8 -*-
from __future__ import unicode_literals

import numbers

from django.utils.encoding import force_str


MISSING = 'n/a'

# (left, fill, junction, right) for each kind of horizontal line
BORDERS = {
	'top': ('╔', '═', '╤', '╗'),
	'separator': ('╟', '─', '┼', '╢'),
	'bottom': ('╚', '═', '╧', '╝'),
	'row': ('║', ' ', '│', '║'),
}


class TablePrinter(object):
	"""
	Textová tabuľka s rámčekom pre výstup príkazov. Čísla sa zarovnávajú
	doprava, chýbajúce hodnoty sa vypíšu ako n/a.
	"""

	def __init__(self, rows, header=None, precision=2):
		self.rows = [list(row) for row in rows]
		self.header = list(header) if header is not None else None
		self.precision = precision

	def format_cell(self, value):
		if value is None:
			return MISSING
		if isinstance(value, bool):
			return 'yes' if value else 'no'
		if isinstance(value, numbers.Integral):
			return '%d' % value
		if isinstance(value, numbers.Real):
			return '%.*f' % (self.precision, value)
		return force_str(value)

	def numeric_columns(self):
		if not self.rows:
			return []
		return [
			all(isinstance(row[idx], numbers.Number) and not isinstance(row[idx], bool) for row in self.rows)
			for idx in range(len(self.rows[0]))
		]

	def column_widths(self, cells):
		lines = cells + ([self.header] if self.header is not None else [])
		if not lines:
			return []
		return [max(len(line[idx]) for line in lines) for idx in range(len(lines[0]))]

	def line(self, kind, widths):
		left, fill, junction, right = BORDERS[kind]
		return left + junction.join(fill * (width + 2) for width in widths) + right

	def row_line(self, cells, widths, numeric):
		left, __, junction, right = BORDERS['row']
		parts = []
		for cell, width, align_right in zip(cells, widths, numeric):
			parts.append(' %s ' % (cell.rjust(width) if align_right else cell.ljust(width)))
		return left + junction.join(parts) + right

	def render(self):
		cells = [[self.format_cell(value) for value in row] for row in self.rows]
		widths = self.column_widths(cells)
		if not widths:
			return ''
		numeric = self.numeric_columns() or [False] * len(widths)
		lines = [self.line('top', widths)]
		if self.header is not None:
			lines.append(self.row_line([force_str(title) for title in self.header], widths, [False] * len(widths)))
			lines.append(self.line('separator', widths))
		for row in cells:
			lines.append(self.row_line(row, widths, numeric))
		lines.append(self.line('bottom', widths))
		return '\n'.join(lines)

	def __str__(self):
		return self.render()


class NamedtupleTablePrinter(TablePrinter):
	def __init__(self, rows, row_type, columns=None, precision=2):
		columns = list(columns) if columns is not None else list(row_type._fields)
		super(NamedtupleTablePrinter, self).__init__(
			[[getattr(row, column) for column in columns] for row in rows],
			header=columns,
			precision=precision
		)


class DictTablePrinter(TablePrinter):
	def __init__(self, data, precision=3):
		super(DictTablePrinter, self).__init__(list(data.items()), precision=precision)
