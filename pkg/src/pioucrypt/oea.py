"""Second security layer: a parity-split stream transform over byte strings.

Plaintext bytes are routed into an even stream and an odd stream by value
parity, recorded in a marker bit string, then both streams are offset by the
master key (key weight times plaintext length) and run through prefix sums.
Two redundancy sections derived from the key frame the result and let the
receiver detect a wrong key. Every step is exactly invertible.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import (
    EmptyKey,
    KeyMismatch,
    MalformedCipher,
    NonByteValue,
    OverflowGuard,
    ParseError,
)

OEA_MAGIC = "PIOU2"

# Guard below which weight * length stays comfortably inside signed 64-bit
# arithmetic for every intermediate value.
MASTER_KEY_LIMIT = 1 << 62


def key_weight(key: bytes) -> int:
    """Sum of the key's byte values."""
    if not key:
        raise EmptyKey("secret key must be non-empty")
    return sum(key)


def master_key(key: bytes, plaintext_length: int) -> int:
    """Key weight times plaintext length, with the overflow guard applied."""
    if plaintext_length < 0:
        raise ValueError("plaintext length must be >= 0")
    value = key_weight(key) * plaintext_length
    if value >= MASTER_KEY_LIMIT:
        raise OverflowGuard(
            f"weight x length = {value} exceeds the 2^62 guard"
        )
    return value


@dataclass
class OeaCipher:
    """Framed cipher sections in output order: red1, sc, se, so, red2."""

    red1: str
    sc: str
    se: list[int] = field(default_factory=list)
    so: list[int] = field(default_factory=list)
    red2: list[int] = field(default_factory=list)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        """Check the key-independent structural invariants."""
        if any(ch not in "01" for ch in self.red1):
            raise MalformedCipher("red1 must contain only '0'/'1'")
        if any(ch not in "01" for ch in self.sc):
            raise MalformedCipher("marker string must contain only '0'/'1'")
        if len(self.sc) != len(self.se) + len(self.so):
            raise MalformedCipher(
                f"marker length {len(self.sc)} != |se| + |so| = {len(self.se) + len(self.so)}"
            )
        if self.sc.count("1") != len(self.so) or self.sc.count("0") != len(self.se):
            raise MalformedCipher("marker bit counts do not match section sizes")
        if len(self.red1) != len(self.red2):
            raise MalformedCipher("redundancy sections must have equal length")


def _redundancy(key: bytes, mk: int, length: int) -> tuple[str, list[int]]:
    # red1 bit rule: even key byte -> '1', odd -> '0' (inverted relative to
    # the marker string's convention)
    bits = "".join("1" if key[i % len(key)] % 2 == 0 else "0" for i in range(length))
    values = [key[i % len(key)] + mk for i in range(length)]
    return bits, values


def oea_encrypt(plaintext: bytes, key: bytes) -> OeaCipher:
    """Encrypt a byte string under the key text."""
    weight = key_weight(key)
    mk = master_key(key, len(plaintext))
    se: list[int] = []
    so: list[int] = []
    sc_bits = []
    for byte in plaintext:
        if byte % 2 == 1:
            so.append(byte)
            sc_bits.append("1")
        else:
            se.append(byte)
            sc_bits.append("0")
    if se:
        se[0] -= mk
        for i in range(1, len(se)):
            se[i] += se[i - 1]
        se[-1] -= mk
    if so:
        so[0] -= mk
        for i in range(1, len(so)):
            so[i] += so[i - 1]
        so[-1] += mk
    red1, red2 = _redundancy(key, mk, weight % 10)
    return OeaCipher("".join(red1), "".join(sc_bits), se, so, red2)


def oea_decrypt(cipher: OeaCipher, key: bytes) -> bytes:
    """Recover the exact plaintext; the key must re-derive the redundancy."""
    cipher.validate()
    weight = key_weight(key)
    mk = master_key(key, len(cipher.sc))

    expected_red1, expected_red2 = _redundancy(key, mk, weight % 10)
    if (
        len(cipher.red1) != weight % 10
        or cipher.red1 != expected_red1
        or cipher.red2 != expected_red2
    ):
        raise KeyMismatch("redundancy sections do not match the supplied key")

    se = list(cipher.se)
    if se:
        se[-1] += mk
        for i in range(len(se) - 1, 0, -1):
            se[i] -= se[i - 1]
        se[0] += mk
    so = list(cipher.so)
    if so:
        so[-1] -= mk
        for i in range(len(so) - 1, 0, -1):
            so[i] -= so[i - 1]
        so[0] += mk

    out = bytearray()
    even_iter = iter(se)
    odd_iter = iter(so)
    for bit in cipher.sc:
        value = next(odd_iter) if bit == "1" else next(even_iter)
        if not 0 <= value <= 255:
            raise NonByteValue(f"recovered value {value} outside [0, 255]")
        out.append(value)
    return bytes(out)


def serialize_oea(cipher: OeaCipher) -> str:
    """Render the cipher as six LF-terminated lines."""
    header = (
        f"{OEA_MAGIC} {len(cipher.red1)} {len(cipher.sc)}"
        f" {len(cipher.se)} {len(cipher.so)} {len(cipher.red2)}"
    )
    lines = [
        header,
        cipher.red1,
        cipher.sc,
        " ".join(str(v) for v in cipher.se),
        " ".join(str(v) for v in cipher.so),
        " ".join(str(v) for v in cipher.red2),
    ]
    return "\n".join(lines) + "\n"


_SECTION_NAMES = ("header", "red1", "sc", "se", "so", "red2")


def _parse_int_line(line: str, count: int, section: str, line_no: int) -> list[int]:
    tokens = line.split(" ") if line else []
    if len(tokens) != count:
        raise ParseError(
            f"{section} section: expected {count} values, found {len(tokens)}", line_no
        )
    values = []
    for token in tokens:
        try:
            value = int(token)
        except ValueError:
            raise ParseError(f"{section} section: {token!r} is not an integer", line_no) from None
        if token != str(value):
            raise ParseError(f"{section} section: {token!r} is not canonical", line_no)
        values.append(value)
    return values


def parse_oea(text: str) -> OeaCipher:
    """Parse the six-line form back into a cipher; inverse of serialize_oea."""
    lines = text.split("\n")
    if not lines or lines[-1] != "":
        raise ParseError("cipher text must end with a newline", len(lines))
    lines.pop()
    if len(lines) != 6:
        missing = _SECTION_NAMES[min(len(lines), 5)]
        raise ParseError(
            f"expected 6 lines, found {len(lines)} (truncated at {missing} section)",
            len(lines) + 1,
        )
    header = lines[0].split(" ")
    if len(header) != 6 or header[0] != OEA_MAGIC:
        raise ParseError(f"header must be '{OEA_MAGIC}' plus five section lengths", 1)
    try:
        n_red1, n_sc, n_se, n_so, n_red2 = (int(tok) for tok in header[1:])
    except ValueError:
        raise ParseError("header lengths must be integers", 1) from None
    if min(n_red1, n_sc, n_se, n_so, n_red2) < 0:
        raise ParseError("header lengths must be >= 0", 1)
    for name, line_no, expected in (("red1", 2, n_red1), ("sc", 3, n_sc)):
        bits = lines[line_no - 1]
        if len(bits) != expected:
            raise ParseError(
                f"{name} section: expected {expected} bits, found {len(bits)}", line_no
            )
        if any(ch not in "01" for ch in bits):
            raise ParseError(f"{name} section: bits must be '0'/'1'", line_no)
    se = _parse_int_line(lines[3], n_se, "se", 4)
    so = _parse_int_line(lines[4], n_so, "so", 5)
    red2 = _parse_int_line(lines[5], n_red2, "red2", 6)
    return OeaCipher(lines[1], lines[2], se, so, red2)
