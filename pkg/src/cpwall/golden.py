"""Published correction factors for He*, Na and Cs atoms near an Au wall at T = 300 K.

Keys are separations in micrometres.  Each cell holds the printed value or
``None`` where the table is blank.  Columns:

* ``a`` -- Lifshitz formula with an accurate (tabulated) polarizability, He* only
* ``b`` -- Lifshitz formula with the single-oscillator polarizability
* ``c`` -- large-separation asymptotic expansion
* ``d`` -- short-separation asymptotic expansion
"""

SEPARATIONS_UM = (
    0.15, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3, 1.4,
    1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 6.0, 7.0, 8.0,
)

_ = None

# fmt: off
# a_um: (He a, He b, He c, He d, Na b, Na c, Na d, Cs b, Cs c, Cs d)
_ETA_ROWS = {
    0.15: (0.5039, 0.5032, _, 0.5050, 0.6415, _, 0.6452, 0.5705, _, 0.5731),
    0.2:  (0.5899, 0.5900, _, 0.5912, 0.7194, _, 0.7217, 0.6551, _, 0.6567),
    0.3:  (0.7070, 0.7077, _, 0.7083, 0.8124, _, 0.8134, 0.7630, _, 0.7637),
    0.4:  (0.7801, 0.7810, _, 0.7814, 0.8635, _, 0.8640, 0.8259, _, 0.8264),
    0.5:  (0.8285, 0.8294, _, 0.8298, 0.8946, _, 0.8950, 0.8657, _, 0.8661),
    0.6:  (0.8620, 0.8627, _, 0.8632, 0.9149, _, 0.9154, 0.8922, _, 0.8928),
    0.7:  (0.8859, 0.8865, _, 0.8872, 0.9289, 0.9235, 0.9297, 0.9108, _, 0.9116),
    0.8:  (0.9035, 0.9040, _, 0.9051, 0.9390, 0.9354, 0.9401, 0.9243, _, 0.9254),
    0.9:  (0.9167, 0.9172, _, 0.9187, 0.9464, 0.9440, 0.9480, 0.9342, 0.9283, 0.9358),
    1.0:  (0.9269, 0.9272, _, 0.9294, 0.9520, 0.9502, 0.9541, 0.9418, 0.9375, 0.9439),
    1.1:  (0.9347, 0.9350, 0.9281, 0.9379, 0.9562, 0.9549, 0.9590, 0.9475, 0.9444, 0.9504),
    1.2:  (0.9409, 0.9411, 0.9360, 0.9448, 0.9594, 0.9584, _, 0.9520, 0.9496, 0.9556),
    1.3:  (0.9458, 0.9460, 0.9420, 0.9504, 0.9619, 0.9612, _, 0.9555, 0.9537, 0.9599),
    1.4:  (0.9498, 0.9499, 0.9468, 0.9552, 0.9640, 0.9633, _, 0.9583, 0.9569, _),
    1.5:  (0.9531, 0.9532, 0.9508, 0.9592, 0.9656, 0.9651, _, 0.9606, 0.9596, _),
    2.0:  (0.9668, 0.9669, 0.9659, _, 0.9741, 0.9739, _, 0.9712, 0.9708, _),
    2.5:  (0.9889, 0.9889, 0.9885, _, 0.9935, 0.9934, _, 0.9917, 0.9914, _),
    3.0:  (1.031, 1.031, 1.030, _, 1.034, 1.033, _, 1.032, 1.032, _),
    3.5:  (1.096, 1.096, 1.095, _, 1.097, 1.097, _, 1.097, 1.097, _),
    4.0:  (1.182, 1.182, 1.182, _, 1.183, 1.183, _, 1.183, 1.183, _),
    4.5:  (1.286, 1.286, 1.285, _, 1.286, 1.286, _, 1.286, 1.286, _),
    5.0:  (1.402, 1.402, 1.402, _, 1.402, 1.402, _, 1.402, 1.402, _),
    6.0:  (1.656, 1.656, 1.656, _, 1.656, 1.656, _, 1.656, 1.656, _),
    7.0:  (1.924, 1.924, 1.924, _, 1.924, 1.924, _, 1.924, 1.924, _),
    8.0:  (2.196, 2.196, 2.196, _, 2.196, 2.196, _, 2.196, 2.196, _),
}

_KAPPA_ROWS = {
    0.15: (0.4298, 0.4284, _, 0.4309, 0.5707, _, 0.5762, 0.4959, _, 0.4995),
    0.2:  (0.5151, 0.5146, _, 0.5163, 0.6553, _, 0.6586, 0.5835, _, 0.5858),
    0.3:  (0.6388, 0.6394, _, 0.6402, 0.7625, _, 0.7640, 0.7028, _, 0.7039),
    0.4:  (0.7214, 0.7224, _, 0.7229, 0.8246, _, 0.8254, 0.7769, _, 0.7775),
    0.5:  (0.7787, 0.7798, _, 0.7811, 0.8637, _, 0.8641, 0.8257, _, 0.8260),
    0.6:  (0.8198, 0.8208, _, 0.8211, 0.8899, _, 0.8902, 0.8593, _, 0.8596),
    0.7:  (0.8500, 0.8511, _, 0.8513, 0.9083, _, 0.9085, 0.8834, _, 0.8837),
    0.8:  (0.8729, 0.8739, _, 0.8741, 0.9218, _, 0.9221, 0.9013, _, 0.9016),
    0.9:  (0.8905, 0.8914, _, 0.8918, 0.9320, 0.9276, 0.9324, 0.9149, _, 0.9152),
    1.0:  (0.9056, 0.9052, _, 0.9057, 0.9399, 0.9368, 0.9405, 0.9254, _, 0.9259),
    1.1:  (0.9155, 0.9161, 0.9036, 0.9170, 0.9461, 0.9438, 0.9469, 0.9336, 0.9280, 0.9345),
    1.2:  (0.9244, 0.9249, 0.9154, 0.9261, 0.9509, 0.9492, 0.9522, 0.9402, 0.9359, 0.9414),
    1.3:  (0.9312, 0.9318, 0.9246, 0.9337, 0.9547, 0.9533, 0.9565, 0.9453, 0.9420, 0.9471),
    1.4:  (0.9371, 0.9374, 0.9317, 0.9400, 0.9576, 0.9565, _, 0.9494, 0.9468, 0.9520),
    1.5:  (0.9416, 0.9418, 0.9373, 0.9454, 0.9598, 0.9589, _, 0.9525, 0.9504, 0.9560),
    2.0:  (0.9515, 0.9516, 0.9498, _, 0.9623, 0.9620, _, 0.9580, 0.9572, _),
    2.5:  (0.9505, 0.9506, 0.9498, _, 0.9577, 0.9575, _, 0.9549, 0.9545, _),
    3.0:  (0.9507, 0.9507, 0.9503, _, 0.9556, 0.9555, _, 0.9537, 0.9534, _),
    3.5:  (0.9620, 0.9620, 0.9617, _, 0.9653, 0.9652, _, 0.9640, 0.9639, _),
    4.0:  (0.9902, 0.9902, 0.9900, _, 0.9925, 0.9924, _, 0.9916, 0.9915, _),
    4.5:  (1.037, 1.037, 1.037, _, 1.038, 1.038, _, 1.038, 1.038, _),
    5.0:  (1.100, 1.100, 1.100, _, 1.101, 1.101, _, 1.100, 1.100, _),
    6.0:  (1.261, 1.261, 1.261, _, 1.262, 1.262, _, 1.262, 1.262, _),
    7.0:  (1.450, 1.450, 1.450, _, 1.450, 1.450, _, 1.450, 1.450, _),
    8.0:  (1.649, 1.649, 1.649, _, 1.649, 1.649, _, 1.649, 1.649, _),
}
# fmt: on

_LAYOUT = (
    ("he-star", "a"), ("he-star", "b"), ("he-star", "c"), ("he-star", "d"),
    ("na", "b"), ("na", "c"), ("na", "d"),
    ("cs", "b"), ("cs", "c"), ("cs", "d"),
)

ATOMS = ("he-star", "na", "cs")


def _unpack(rows):
    table = {atom: {} for atom in ATOMS}
    for a_um, cells in rows.items():
        for (atom, col), value in zip(_LAYOUT, cells):
            table[atom].setdefault(a_um, {})[col] = value
    return table


ETA = _unpack(_ETA_ROWS)
KAPPA = _unpack(_KAPPA_ROWS)


def golden(which):
    """Return the nested ``{atom: {a_um: {column: value}}}`` mapping for table 1 or 2."""
    if which == 1:
        return ETA
    if which == 2:
        return KAPPA
    raise ValueError(f"no table {which!r}; expected 1 or 2")


def cells(which, column):
    """Yield ``(atom, a_um, value)`` for every printed cell of a column."""
    table = golden(which)
    for atom in ATOMS:
        for a_um in SEPARATIONS_UM:
            value = table[atom][a_um].get(column)
            if value is not None:
                yield atom, a_um, value
