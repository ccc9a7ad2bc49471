from __future__ import print_function

import datetime
import json
import re
import sys
import uuid

import six

TIMESTAMP_FORMAT = '%Y-%m-%dT%H:%M:%SZ'
_TOKEN_REGEX = re.compile(r'^[A-Za-z0-9][A-Za-z0-9_.\-]*$')


def utc_now():
    """current UTC time, truncated to second precision"""
    return datetime.datetime.now(datetime.timezone.utc).replace(tzinfo=None, microsecond=0)


def format_timestamp(timestamp):
    """render a naive UTC ``datetime`` as ``YYYY-MM-DDTHH:MM:SSZ``"""
    if timestamp is None:
        return None
    return timestamp.strftime(TIMESTAMP_FORMAT)


def parse_timestamp(text):
    """parse a ``YYYY-MM-DDTHH:MM:SSZ`` string into a naive UTC ``datetime``"""
    if text is None:
        return None
    if isinstance(text, datetime.datetime):
        return text.replace(microsecond=0)
    return datetime.datetime.strptime(text, TIMESTAMP_FORMAT)


def new_uuid():
    return str(uuid.uuid4())


def is_uuid(text):
    if not isinstance(text, six.string_types):
        return False
    try:
        return str(uuid.UUID(text)) == text.lower()
    except ValueError:
        return False


def is_token(text):
    """``True`` for a nonempty machine name without whitespace"""
    return isinstance(text, six.string_types) and bool(_TOKEN_REGEX.match(text))


def is_url(text):
    if not isinstance(text, six.string_types):
        return False
    _parsed = six.moves.urllib.parse.urlparse(text)
    return bool(_parsed.scheme) and bool(_parsed.netloc or _parsed.path)


def canonical_json(document):
    """deterministic JSON bytes for a document (sorted keys, no extra whitespace)"""
    return json.dumps(document, sort_keys=True, separators=(',', ':')).encode('utf-8')


def print_json(document, output_stream=sys.stdout, sort_keys=True):
    output_stream.write(json.dumps(document, indent=2, sort_keys=sort_keys) + '\n')
    output_stream.flush()
