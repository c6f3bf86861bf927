"""Binary <-> DNA-base payload codec.

Each transported message is a bit string mapped onto the four nucleotide
bases with G and T standing for 1 and A and C standing for 0.  Decoding is
therefore a fixed 4->2 letter map, while encoding may pick either base of
the matching pair per bit; the pick is delegated to a policy so that any
valid base choice round-trips.
"""

from typing import Callable, Union

from .errors import BactlinkError

ONE_BASES = "GT"
ZERO_BASES = "AC"

# policy(bit_index, bit) -> base for that bit
EncodePolicy = Callable[[int, int], str]


class DecodeError(BactlinkError):
    """A base string contains a character outside {A, C, G, T}."""


class EncodeError(BactlinkError):
    """A bit string contains a character outside {0, 1}, or a policy misbehaved."""


def _canonical(i: int, bit: int) -> str:
    return "G" if bit else "A"


def _alternating(i: int, bit: int) -> str:
    # cycle G,T,G,... for ones and A,C,A,... for zeros by bit position
    pair = ONE_BASES if bit else ZERO_BASES
    return pair[i % 2]


POLICIES: dict[str, EncodePolicy] = {
    "canonical": _canonical,
    "alternating": _alternating,
}


def encode(bits: str, policy: Union[str, EncodePolicy] = "canonical") -> str:
    """Encode a 0/1 string into a base string, one base per bit.

    `policy` is a registered policy name or a callable `(index, bit) -> base`;
    the returned base must belong to the pair matching the bit (GT for 1,
    AC for 0), which keeps decode(encode(bits)) == bits for every policy.
    """
    if isinstance(policy, str):
        try:
            policy_fn = POLICIES[policy]
        except KeyError:
            raise EncodeError(f"unknown encode policy {policy!r}") from None
    else:
        policy_fn = policy
    out = []
    for i, ch in enumerate(bits):
        if ch == "0":
            bit = 0
        elif ch == "1":
            bit = 1
        else:
            raise EncodeError(f"invalid bit {ch!r} at position {i}")
        base = policy_fn(i, bit)
        if base not in (ONE_BASES if bit else ZERO_BASES):
            raise EncodeError(f"policy produced base {base!r} for bit {bit} at position {i}")
        out.append(base)
    return "".join(out)


def decode(bases: str) -> str:
    """Decode a base string back to bits: G,T -> 1 and A,C -> 0."""
    out = []
    for i, ch in enumerate(bases):
        if ch in ONE_BASES:
            out.append("1")
        elif ch in ZERO_BASES:
            out.append("0")
        else:
            raise DecodeError(f"invalid base {ch!r} at position {i}")
    return "".join(out)
