"""Plain-text channel files and the complex literal format.

A channel file holds one realization::

    n_t n_e
    <n_t receiver entries>
    <n_e rows of n_t eavesdropper entries>

Entries are whitespace-separated complex literals ``a+bi`` / ``a-bi``
with decimal reals (a bare real is also accepted).  Formatting uses 17
significant digits so values round-trip losslessly through text.
"""

from __future__ import annotations

import re

from .capacity import ChannelRealization

_REAL = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_COMPLEX_RE = re.compile(rf"^(?P<re>{_REAL})(?:(?P<im>[+-](?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)i)?$")


class ChannelFileError(ValueError):
    """Malformed channel file, with the offending position in the message."""


def parse_complex(token: str) -> complex:
    """Parse one ``a+bi`` / ``a-bi`` / ``a`` literal."""
    m = _COMPLEX_RE.match(token)
    if m is None:
        raise ValueError(f"malformed complex literal {token!r}")
    re_part = float(m.group("re"))
    im_part = float(m.group("im")) if m.group("im") is not None else 0.0
    return complex(re_part, im_part)


def format_complex(z: complex) -> str:
    """Format a complex value so that parse_complex round-trips it."""
    z = complex(z)
    sign = "-" if z.imag < 0 else "+"
    return f"{z.real:.17g}{sign}{abs(z.imag):.17g}i"


def _parse_row(line: str, lineno: int, expected: int, what: str) -> list[complex]:
    tokens = line.split()
    if len(tokens) != expected:
        raise ChannelFileError(
            f"line {lineno}: expected {expected} {what} entries, "
            f"got {len(tokens)}"
        )
    out = []
    col = 1
    for tok in tokens:
        try:
            out.append(parse_complex(tok))
        except ValueError:
            raise ChannelFileError(
                f"line {lineno}, entry {col}: malformed complex literal {tok!r}"
            ) from None
        col += 1
    return out


def parse_channel_text(text: str) -> ChannelRealization:
    """Parse channel file contents into a validated realization."""
    lines = [ln for ln in (raw.strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise ChannelFileError("line 1: empty channel file")
    header = lines[0].split()
    if len(header) != 2:
        raise ChannelFileError(
            f"line 1: header must be 'n_t n_e', got {lines[0]!r}"
        )
    try:
        n_t, n_e = int(header[0]), int(header[1])
    except ValueError:
        raise ChannelFileError(
            f"line 1: header must hold two integers, got {lines[0]!r}"
        ) from None
    if n_t < 1 or n_e < 0:
        raise ChannelFileError(
            f"line 1: need n_t >= 1 and n_e >= 0, got n_t={n_t} n_e={n_e}"
        )
    if len(lines) != 2 + n_e:
        raise ChannelFileError(
            f"expected {2 + n_e} nonempty lines for n_e={n_e}, got {len(lines)}"
        )
    h = _parse_row(lines[1], 2, n_t, "receiver")
    rows = [
        _parse_row(lines[2 + k], 3 + k, n_t, "eavesdropper row")
        for k in range(n_e)
    ]
    return ChannelRealization(h_r=h, H_e=rows if n_e else None)


def parse_channel_file(path) -> ChannelRealization:
    """Read and parse a channel file from disk."""
    with open(path, "r", encoding="utf-8") as f:
        return parse_channel_text(f.read())


def format_channel(ch: ChannelRealization) -> str:
    """Render a realization in the channel file format."""
    lines = [f"{ch.n_t} {ch.n_e}"]
    lines.append(" ".join(format_complex(z) for z in ch.h_r))
    for row in ch.H_e:
        lines.append(" ".join(format_complex(z) for z in row))
    return "\n".join(lines) + "\n"
