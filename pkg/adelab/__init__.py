"""adelab: точная арифметика для p-кривизны, векторных полей и периодов."""

__version__ = "0.1.0"
