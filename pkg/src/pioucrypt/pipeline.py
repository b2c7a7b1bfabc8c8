"""End-to-end orchestration: image I/O, both layers, histograms, bundles.

The sender path scrambles the image (layer 1), builds the lattice point
matrix from the image dimensions, factorizes it, and encrypts the layer-1 key
text under the serialized factor matrix (layer 2). The three artifacts --
cipher image, layer-2 ciphertext, layer-2 key -- are written all-or-nothing.

Only bit-exact image containers are supported: binary PPM (P6, maxval 255)
in and out, binary PGM (P5) promoted to RGB on read. Lossy formats would
break the losslessness guarantee, so they are rejected outright.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, MalformedHeader, ParseError, UnsupportedFormat
from .layer1 import (
    RgbImage,
    decrypt_layer1,
    encrypt_layer1,
    parse_layer1_key,
    serialize_layer1_key,
)
from .lattice import (
    NmfConfig,
    WindowSpec,
    derive_lattice_vectors,
    generate_lattice_points,
    nmf_multiplicative,
    serialize_key_matrix,
)
from .oea import oea_decrypt, oea_encrypt, parse_oea, serialize_oea
from .prng import LcgParams, Tlcg, Xorshift1024

# Salt mixed into the master seed for the factorization start point, so the
# vector-derivation stream and the initializer stream differ.
NMF_SEED_SALT = 0x9E3779B97F4A7C15

CIPHER_IMAGE_SUFFIX = ".cipher.ppm"
OEA_CIPHER_SUFFIX = ".cipher.oea"
OEA_KEY_SUFFIX = ".key.oeaw"

_WHITESPACE = b" \t\n\r\x0b\x0c"


def _next_header_token(data: bytes, pos: int) -> tuple[bytes, int]:
    while pos < len(data):
        byte = data[pos : pos + 1]
        if byte in (b"#",):
            while pos < len(data) and data[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif byte in _WHITESPACE:
            pos += 1
        else:
            break
    start = pos
    while pos < len(data) and data[pos : pos + 1] not in _WHITESPACE:
        pos += 1
    if start == pos:
        raise MalformedHeader("unexpected end of header")
    return data[start:pos], pos


def _header_int(data: bytes, pos: int, what: str) -> tuple[int, int]:
    token, pos = _next_header_token(data, pos)
    try:
        value = int(token)
    except ValueError:
        raise MalformedHeader(f"{what}: {token!r} is not an integer") from None
    if value < 1:
        raise MalformedHeader(f"{what} must be >= 1")
    return value, pos


def read_image(path) -> RgbImage:
    """Read a binary PPM (P6) or PGM (P5) file with maxval 255."""
    data = Path(path).read_bytes()
    magic = data[:2]
    if magic not in (b"P6", b"P5"):
        raise UnsupportedFormat(f"unsupported magic {magic!r}; need binary P6 or P5")
    width, pos = _header_int(data, 2, "width")
    height, pos = _header_int(data, pos, "height")
    maxval, pos = _header_int(data, pos, "maxval")
    if maxval != 255:
        raise UnsupportedFormat(f"maxval {maxval} unsupported; need 255")
    if pos >= len(data) or data[pos : pos + 1] not in _WHITESPACE:
        raise MalformedHeader("missing whitespace after maxval")
    pos += 1
    channels = 3 if magic == b"P6" else 1
    expected = width * height * channels
    payload = data[pos : pos + expected]
    if len(payload) < expected:
        raise MalformedHeader(
            f"truncated pixel data: expected {expected} bytes, found {len(payload)}"
        )
    pixels = np.frombuffer(payload, dtype=np.uint8)
    if magic == b"P6":
        planes = pixels.reshape(height, width, 3)
        return RgbImage(planes[:, :, 0].copy(), planes[:, :, 1].copy(), planes[:, :, 2].copy())
    return RgbImage.from_gray(pixels.reshape(height, width))


def write_image(image: RgbImage, path) -> None:
    """Write a binary PPM (P6, maxval 255); pixel payload is bit-exact."""
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    payload = np.stack(image.planes(), axis=-1).tobytes()
    Path(path).write_bytes(header + payload)


@dataclass
class HistogramReport:
    """Per-channel counts of the 256 brightness levels."""

    width: int
    height: int
    red: list[int]
    green: list[int]
    blue: list[int]

    def channel(self, name: str) -> list[int]:
        return getattr(self, name)


def histogram(image: RgbImage) -> HistogramReport:
    """Exact per-channel level counts; each channel sums to width*height."""
    counts = [
        np.bincount(plane.ravel(), minlength=256).tolist() for plane in image.planes()
    ]
    return HistogramReport(image.width, image.height, *counts)


def analyze(image_path, csv_path) -> HistogramReport:
    """Write the histogram as CSV (channel, level, count; 768 data rows)."""
    report = histogram(read_image(image_path))
    lines = ["channel,level,count"]
    for name in ("red", "green", "blue"):
        lines.extend(
            f"{name},{level},{count}" for level, count in enumerate(report.channel(name))
        )
    Path(csv_path).write_text("\n".join(lines) + "\n", encoding="ascii")
    return report


@dataclass
class PipelineConfig:
    """One seed drives the whole pipeline; everything else is optional."""

    seed: int
    tlcg_streams: tuple[LcgParams, LcgParams, LcgParams] | None = None
    nmf: NmfConfig | None = None
    out_dir: Path | None = None

    def __post_init__(self):
        if not 0 <= self.seed < 1 << 64:
            raise ValueError("seed must be an unsigned 64-bit integer")

    def make_tlcg(self) -> Tlcg:
        if self.tlcg_streams is not None:
            return Tlcg(self.tlcg_streams)
        return Tlcg.from_seed(self.seed)

    def make_nmf_config(self) -> NmfConfig:
        if self.nmf is not None:
            return self.nmf
        return NmfConfig(seed=self.seed ^ NMF_SEED_SALT)


@dataclass
class EncryptionBundle:
    """The sender's three mutually consistent artifacts."""

    cipher_image: RgbImage
    oea_cipher_text: str
    oea_key_text: str
    paths: tuple[Path, Path, Path] | None = None


def _bundle_paths(image_path: Path, out_dir: Path) -> tuple[Path, Path, Path]:
    stem = image_path.stem
    return (
        out_dir / f"{stem}{CIPHER_IMAGE_SUFFIX}",
        out_dir / f"{stem}{OEA_CIPHER_SUFFIX}",
        out_dir / f"{stem}{OEA_KEY_SUFFIX}",
    )


def _write_all_or_nothing(payloads: list[tuple[Path, bytes]]) -> None:
    temps = []
    promoted = []
    try:
        for target, blob in payloads:
            temp = target.with_name(target.name + ".tmp")
            temp.write_bytes(blob)
            temps.append((temp, target))
        for temp, target in temps:
            os.replace(temp, target)
            promoted.append(target)
    except BaseException:
        for temp, _ in temps:
            temp.unlink(missing_ok=True)
        for target in promoted:
            target.unlink(missing_ok=True)
        raise


def encrypt_pipeline(image_path, config: PipelineConfig) -> EncryptionBundle:
    """Run both layers over an image file and write the bundle to disk.

    Nothing is written until every artifact is computed, so a failure in any
    stage leaves no partial bundle behind.
    """
    image_path = Path(image_path)
    image = read_image(image_path)

    rng = Xorshift1024(config.seed)
    cipher_image, layer1_key = encrypt_layer1(image, rng)
    plaintext = serialize_layer1_key(layer1_key).encode("ascii")

    window = WindowSpec(image.width, image.height)
    tlcg = config.make_tlcg()
    vectors = derive_lattice_vectors(tlcg, window)
    points = generate_lattice_points(vectors, window)
    factors = nmf_multiplicative(points.astype(np.float64), config.make_nmf_config())
    oea_key_text = serialize_key_matrix(factors.W)

    cipher = oea_encrypt(plaintext, oea_key_text.encode("ascii"))
    oea_cipher_text = serialize_oea(cipher)

    out_dir = config.out_dir if config.out_dir is not None else image_path.parent
    out_dir = Path(out_dir)
    if not out_dir.is_dir():
        raise NotADirectoryError(f"output directory {out_dir} does not exist")
    paths = _bundle_paths(image_path, out_dir)
    image_header = f"P6\n{cipher_image.width} {cipher_image.height}\n255\n".encode("ascii")
    image_blob = image_header + np.stack(cipher_image.planes(), axis=-1).tobytes()
    _write_all_or_nothing(
        [
            (paths[0], image_blob),
            (paths[1], oea_cipher_text.encode("ascii")),
            (paths[2], oea_key_text.encode("ascii")),
        ]
    )
    return EncryptionBundle(cipher_image, oea_cipher_text, oea_key_text, paths)


def decrypt_pipeline(cipher_image_path, oea_cipher_path, oea_key_path, out_path=None) -> RgbImage:
    """Invert a bundle back to the original image and write it to disk."""
    cipher_image_path = Path(cipher_image_path)
    cipher_image = read_image(cipher_image_path)
    key_bytes = Path(oea_key_path).read_bytes()
    try:
        cipher_text = Path(oea_cipher_path).read_bytes().decode("ascii")
    except UnicodeDecodeError as exc:
        raise ParseError(f"ciphertext is not ASCII: {exc}") from None
    cipher = parse_oea(cipher_text)
    plaintext = oea_decrypt(cipher, key_bytes)
    try:
        key_text = plaintext.decode("ascii")
    except UnicodeDecodeError as exc:
        raise ParseError(f"recovered key text is not ASCII: {exc}") from None
    layer1_key = parse_layer1_key(key_text)
    if (layer1_key.width, layer1_key.height) != (cipher_image.width, cipher_image.height):
        raise DimensionMismatch(
            f"key is {layer1_key.width}x{layer1_key.height}, cipher image is "
            f"{cipher_image.width}x{cipher_image.height}"
        )
    plain = decrypt_layer1(cipher_image, layer1_key)
    if out_path is None:
        out_path = cipher_image_path.with_name(cipher_image_path.stem + ".dec.ppm")
    write_image(plain, out_path)
    return plain
