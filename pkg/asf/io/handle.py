import json
import os
import tempfile

__all__ = ['IOStreamHandle', 'IOFileHandle', 'InputFileHandle', 'OutputFileHandle',
           'AppendFileHandle', 'JsonLinesFileHandle', 'atomic_write']


class IOStreamHandle(object):
    """
    Thin wrapper around an already opened stream (``sys.stdout``, a ``StringIO``, ...).
    Representation readers and writers only talk to handles, so a document can go to a file
    or to a stream without the representation knowing.
    """

    def __init__(self, buffer):
        self._buffer = buffer

    def __repr__(self):
        return "{}(buffer={})".format(self.__class__.__name__, self._buffer)

    # the stream belongs to the caller: the context neither opens nor closes it
    def __enter__(self):
        return self._buffer

    def __exit__(self, *args):
        pass

    @property
    def closed(self):
        return self._buffer is None or self._buffer.closed

    def _require_buffer(self, operation):
        if self._buffer is None:
            raise IOError("Cannot {}: no stream attached to {!r}".format(operation, self))
        return self._buffer

    def write(self, content):
        return self._require_buffer('write').write(content)

    def read(self, *args, **kwargs):
        return self._require_buffer('read').read(*args, **kwargs)


class IOFileHandle(IOStreamHandle):
    """
    Stream handle bound to a file name. The file is opened on entering a context and closed
    on leaving it; :py:meth:`write` and :py:meth:`read` open a context of their own.

    In mode ``'w'`` the content goes to a temporary file next to the target which replaces
    the target only when the context is left without an exception. Readers of the target
    therefore see either the old or the new content, never a truncated file.
    """

    _VALID_MODES = ('r', 'a', 'w')

    def __init__(self, filename, mode):
        super(IOFileHandle, self).__init__(buffer=None)
        if mode not in self._VALID_MODES:
            raise ValueError("Unknown file handle mode '{}': expecting one of {}".format(mode, self._VALID_MODES))
        if os.path.isdir(filename):
            raise ValueError("Cannot use '{}' as a file: it is a directory!".format(filename))
        self._filename = filename
        self._mode = mode
        self._tmp_filename = None

    def __repr__(self):
        return "{}(filename={!r})".format(self.__class__.__name__, self._filename)

    def __enter__(self):
        if self._buffer is not None:
            raise IOError("Cannot open file '{}': already open!".format(self._filename))
        if self._mode == 'w':
            _fd, self._tmp_filename = tempfile.mkstemp(
                prefix='.tmp-', dir=os.path.dirname(os.path.abspath(self._filename)))
            self._buffer = os.fdopen(_fd, 'w')
        else:
            self._buffer = open(self._filename, self._mode)
        return self._buffer

    def __exit__(self, exc_type, *args):
        _buffer, self._buffer = self._buffer, None
        _tmp_filename, self._tmp_filename = self._tmp_filename, None
        if _tmp_filename is None:
            _buffer.close()
            return
        try:
            _buffer.flush()
            os.fsync(_buffer.fileno())
        finally:
            _buffer.close()
        if exc_type is None:
            os.replace(_tmp_filename, self._filename)
        else:
            os.unlink(_tmp_filename)

    @property
    def filename(self):
        return self._filename

    @property
    def mode(self):
        return self._mode

    def write(self, content):
        with self as _fh:
            _fh.write(content)

    def read(self, *args, **kwargs):
        with self as _fh:
            return _fh.read(*args, **kwargs)


class InputFileHandle(IOFileHandle):
    def __init__(self, filename):
        super(InputFileHandle, self).__init__(filename, mode='r')

    def write(self, content):
        raise IOError("Cannot write to 'InputFileHandle'!")


class OutputFileHandle(IOFileHandle):
    """replaces the file content atomically"""

    def __init__(self, filename):
        super(OutputFileHandle, self).__init__(filename, mode='w')

    def read(self, *args, **kwargs):
        raise IOError("Cannot read from 'OutputFileHandle'!")


class AppendFileHandle(IOFileHandle):
    def __init__(self, filename):
        super(AppendFileHandle, self).__init__(filename, mode='a')

    def read(self, *args, **kwargs):
        raise IOError("Cannot read from 'AppendFileHandle'!")


class JsonLinesFileHandle(AppendFileHandle):
    """
    Newline-delimited JSON: one document per line, appended in order.

    With ``sync=True`` every appended line is flushed to disk before :py:meth:`append`
    returns. The audit trail relies on this.
    """

    def __init__(self, filename, sync=False):
        super(JsonLinesFileHandle, self).__init__(filename)
        self._sync = sync

    def append(self, document):
        _line = json.dumps(document, sort_keys=True) + '\n'
        with self as _fh:
            _fh.write(_line)
            if self._sync:
                _fh.flush()
                os.fsync(_fh.fileno())

    def documents(self):
        """
        Yield ``(line_number, document)`` for every non-blank line, numbering from 1.

        :raise ValueError: on the first line that is not valid JSON (the message names the line)
        """
        if not os.path.exists(self._filename):
            return
        with open(self._filename) as _f:
            for _i, _line in enumerate(_f, 1):
                if not _line.strip():
                    continue
                try:
                    _document = json.loads(_line)
                except ValueError as _e:
                    raise ValueError("'{}', line {}: {}".format(self._filename, _i, _e))
                yield _i, _document


def atomic_write(filename, content):
    """Replace the content of `filename` by `content`."""
    OutputFileHandle(filename).write(content)
