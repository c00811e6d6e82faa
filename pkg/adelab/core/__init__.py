"""Точная арифметика: скаляры, многочлены, ряды, матрицы, плотные ядра mod p^k."""
