from fractions import Fraction

import base58

_BASE58_ALPHABET = base58.BITCOIN_ALPHABET.decode()


class CanonicalCode(bytes):
    '''Isomorphism-invariant code for a graph: two graphs get equal codes
    exactly when they're isomorphic. The raw bytes are what we compare
    and sort by; the text form is base58, since codes end up in reports
    and on command lines, and base58 has no quoting hazards and no
    confusable characters.

    Codes start with a one-byte tag: b'T' for trees (the rest is a
    parenthesized rooted encoding) and b'G' for everything else (the
    rest is the vertex count plus a packed adjacency bitstring). Those
    two tags never collide for the same graph, since a graph either is
    a tree or isn't.
    '''

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, value):
        '''Convert an incoming base58 string (or an existing code) into
        a CanonicalCode.
        '''
        if isinstance(value, cls):
            return value

        if not isinstance(value, str):
            raise TypeError('Value must be str')

        try:
            raw = base58.b58decode(value)
        except ValueError as exc:
            raise ValueError('Invalid base58') from exc

        if not raw or raw[:1] not in (b'T', b'G'):
            raise ValueError('Invalid canonical code tag')

        return cls(raw)

    @classmethod
    def __modify_schema__(cls, field_schema):
        field_schema.update(
            type='string',
            pattern=f'^[{_BASE58_ALPHABET}]+$',
        )

    def __str__(self):
        return base58.b58encode(bytes(self)).decode()

    def __repr__(self):
        return f'CanonicalCode({str(self)!r})'


def rat_to_str(value):
    '''Serialize a rational as "p/q", always with an explicit
    denominator, so that integers come out as eg "2/1".
    '''
    value = Fraction(value)
    return f'{value.numerator}/{value.denominator}'


def parse_rat(text):
    '''Inverse of rat_to_str. Also accepts bare integers, for
    convenience on the command line.
    '''
    if not isinstance(text, str):
        raise TypeError('Value must be str')

    numerator, sep, denominator = text.strip().partition('/')
    try:
        if sep:
            return Fraction(int(numerator), int(denominator))
        else:
            return Fraction(int(numerator))

    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f'Invalid rational: {text!r}') from exc


class Rational(Fraction):
    '''Field type for exact rationals in report models. Accepts
    Fractions, ints and "p/q" strings; reports render it with
    rat_to_str.
    '''

    @classmethod
    def __get_validators__(cls):
        yield cls.validate

    @classmethod
    def validate(cls, value):
        if isinstance(value, str):
            return parse_rat(value)

        if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
            return Fraction(value)

        raise TypeError('Value must be a rational or a "p/q" string')

    @classmethod
    def __modify_schema__(cls, field_schema):
        field_schema.update(type='string', pattern=r'^-?\d+/\d+$')
