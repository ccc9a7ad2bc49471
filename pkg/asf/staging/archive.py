"""
Data staging: package a directory into one compressed archive, move it in a single
operation and unpack it on the other side with integrity verification.

The archive is a gzip-compressed POSIX tar file. Its first member ``_manifest.json`` lists
every regular file with size and SHA-256 digest; members follow in sorted path order.
"""

import datetime
import gzip
import hashlib
import io
import json
import logging
import os
import shutil
import stat
import tarfile
import tempfile
import zlib

from collections import namedtuple

from ..tools import format_timestamp, parse_timestamp

__all__ = ['StagingManifest', 'FileRecord', 'TransferReceipt', 'package', 'transfer', 'unpack', 'stage',
           'stage_with_receipt', 'scan_tree',
           'StagingError', 'StagingNotFoundError', 'StagingIntegrityError', 'StagingPathError',
           'MANIFEST_MEMBER']

logger = logging.getLogger(__name__)

MANIFEST_MEMBER = '_manifest.json'
_CHUNK_SIZE = 1 << 20
_EPOCH = datetime.datetime(1970, 1, 1)


class StagingError(Exception):
    pass


class StagingNotFoundError(StagingError):
    pass


class StagingIntegrityError(StagingError):
    pass


class StagingPathError(StagingError):
    pass


class FileRecord(namedtuple('FileRecord', ('path', 'size', 'sha256'))):
    __slots__ = ()


class StagingManifest(namedtuple('StagingManifest', ('count', 'total_bytes', 'created', 'files'))):
    """Content description of a staged tree: relative path, size and digest of every file."""
    __slots__ = ()

    def to_document(self):
        return dict(count=self.count, total_bytes=self.total_bytes, created=format_timestamp(self.created),
                    files=[dict(_f._asdict()) for _f in self.files])

    @classmethod
    def from_document(cls, document):
        try:
            _files = tuple(FileRecord(path=_f['path'], size=int(_f['size']), sha256=_f['sha256'])
                           for _f in document['files'])
            _manifest = cls(count=int(document['count']), total_bytes=int(document['total_bytes']),
                            created=parse_timestamp(document['created']), files=_files)
        except (KeyError, TypeError, ValueError) as _e:
            raise StagingIntegrityError("Malformed staging manifest: {}".format(_e))
        if _manifest.count != len(_files) or _manifest.total_bytes != sum(_f.size for _f in _files):
            raise StagingIntegrityError("Staging manifest totals do not match its file list")
        for _f in _files:
            _check_relative_path(_f.path)
        return _manifest

    def to_json(self):
        return json.dumps(self.to_document(), indent=2, sort_keys=True) + '\n'


class TransferReceipt(namedtuple('TransferReceipt', ('path', 'bytes_moved', 'operations'))):
    __slots__ = ()

    def to_document(self):
        return dict(self._asdict())


def _check_relative_path(path):
    _parts = path.split('/')
    if not path or path.startswith('/') or os.path.isabs(path) or '..' in _parts or '' in _parts:
        raise StagingPathError("Refusing unsafe archive path '{}'".format(path))
    return path


def _sha256(filename):
    _hash = hashlib.sha256()
    with open(filename, 'rb') as _f:
        for _chunk in iter(lambda: _f.read(_CHUNK_SIZE), b''):
            _hash.update(_chunk)
    return _hash.hexdigest()


def scan_tree(directory):
    """
    Describe all regular files below `directory`.

    :rtype: :py:class:`StagingManifest`
    :raise StagingPathError: for symbolic links and special files
    """
    if not directory:
        raise StagingPathError("Empty directory path")
    if not os.path.isdir(directory):
        raise StagingNotFoundError("Not a directory: '{}'".format(directory))
    _files = []
    _newest = None
    for _root, _dirs, _names in os.walk(directory):
        _dirs.sort()
        for _name in sorted(_dirs + _names):
            _full = os.path.join(_root, _name)
            _relative = os.path.relpath(_full, directory).replace(os.sep, '/')
            _st = os.lstat(_full)
            if stat.S_ISLNK(_st.st_mode):
                raise StagingPathError("Refusing to package symbolic link '{}'".format(_relative))
            if stat.S_ISDIR(_st.st_mode):
                continue
            if not stat.S_ISREG(_st.st_mode):
                raise StagingPathError("Refusing to package special file '{}'".format(_relative))
            if _relative == MANIFEST_MEMBER:
                raise StagingPathError("File name '{}' is reserved for the manifest".format(MANIFEST_MEMBER))
            try:
                _digest = _sha256(_full)
            except (IOError, OSError) as _e:
                raise StagingError("Cannot read '{}': {}".format(_relative, _e))
            _files.append(FileRecord(path=_relative, size=_st.st_size, sha256=_digest))
            _mtime = int(_st.st_mtime)
            _newest = _mtime if _newest is None else max(_newest, _mtime)
    _files.sort(key=lambda _f: _f.path)
    _created = _EPOCH + datetime.timedelta(seconds=_newest) if _newest is not None else _EPOCH
    return StagingManifest(count=len(_files), total_bytes=sum(_f.size for _f in _files), created=_created,
                           files=tuple(_files))


def _tar_info(name, size, mtime):
    _info = tarfile.TarInfo(name)
    _info.size = size
    _info.mtime = mtime
    _info.mode = 0o644
    _info.uid = _info.gid = 0
    _info.uname = _info.gname = ''
    return _info


def package(directory, archive=None):
    """
    Pack all regular files below `directory` into a ``.tar.gz`` archive.

    :param archive: archive file name; a new temporary file if omitted
    :return: ``(archive path, manifest)``
    """
    _manifest = scan_tree(directory)
    if archive is None:
        _fd, archive = tempfile.mkstemp(suffix='.tar.gz', prefix='asf-stage-')
        os.close(_fd)
    _manifest_bytes = _manifest.to_json().encode('utf-8')
    _mtime = int((_manifest.created - _EPOCH).total_seconds())
    try:
        with tarfile.open(archive, mode='w:gz', format=tarfile.PAX_FORMAT) as _tar:
            _tar.addfile(_tar_info(MANIFEST_MEMBER, len(_manifest_bytes), _mtime), io.BytesIO(_manifest_bytes))
            for _record in _manifest.files:
                _full = os.path.join(directory, *_record.path.split('/'))
                with open(_full, 'rb') as _f:
                    _tar.addfile(_tar_info(_record.path, _record.size, int(os.stat(_full).st_mtime)), _f)
    except (IOError, OSError, tarfile.TarError) as _e:
        raise StagingError("Cannot write archive '{}': {}".format(archive, _e))
    logger.info("Packaged %d file(s), %d bytes from '%s' into '%s'",
                _manifest.count, _manifest.total_bytes, directory, archive)
    return archive, _manifest


def transfer(archive, destination):
    """
    Copy an archive to `destination` (a directory or a target file name) in one operation.

    :rtype: :py:class:`TransferReceipt`
    """
    if not os.path.isfile(archive):
        raise StagingNotFoundError("Archive not found: '{}'".format(archive))
    _target = os.path.join(destination, os.path.basename(archive)) if os.path.isdir(destination) else destination
    _target_dir = os.path.dirname(os.path.abspath(_target))
    _tmp = None
    try:
        _fd, _tmp = tempfile.mkstemp(prefix='.transfer-', dir=_target_dir)
        os.close(_fd)
        shutil.copyfile(archive, _tmp)
        os.replace(_tmp, _target)
    except (IOError, OSError) as _e:
        if _tmp is not None and os.path.exists(_tmp):
            os.unlink(_tmp)
        raise StagingError("Cannot transfer '{}' to '{}': {}".format(archive, destination, _e))
    _receipt = TransferReceipt(path=_target, bytes_moved=os.path.getsize(_target), operations=1)
    logger.info("Transferred '%s' (%d bytes) to '%s'", archive, _receipt.bytes_moved, _target)
    return _receipt


def _verify_stream(archive):
    try:
        with gzip.open(archive, 'rb') as _f:
            while _f.read(_CHUNK_SIZE):
                pass
    except (IOError, OSError, EOFError, zlib.error) as _e:
        raise StagingIntegrityError("Archive '{}' is corrupt: {}".format(archive, _e))


def _extract(archive, target):
    _manifest = None
    _seen = dict()
    try:
        with tarfile.open(archive, mode='r:gz') as _tar:
            for _member in _tar:
                if _member.name == MANIFEST_MEMBER and _manifest is None:
                    _manifest = StagingManifest.from_document(json.loads(_tar.extractfile(_member).read().decode('utf-8')))
                    _expected = dict((_f.path, _f) for _f in _manifest.files)
                    continue
                if _manifest is None:
                    raise StagingIntegrityError("Archive does not start with '{}'".format(MANIFEST_MEMBER))
                _check_relative_path(_member.name)
                if not _member.isfile():
                    raise StagingPathError("Refusing non-regular archive member '{}'".format(_member.name))
                _record = _expected.get(_member.name)
                if _record is None or _member.name in _seen:
                    raise StagingIntegrityError("Unexpected archive member '{}'".format(_member.name))
                _out = os.path.join(target, *_member.name.split('/'))
                _parent = os.path.dirname(_out)
                if not os.path.isdir(_parent):
                    os.makedirs(_parent)
                _hash = hashlib.sha256()
                _size = 0
                _source = _tar.extractfile(_member)
                with open(_out, 'wb') as _f:
                    for _chunk in iter(lambda: _source.read(_CHUNK_SIZE), b''):
                        _hash.update(_chunk)
                        _size += len(_chunk)
                        _f.write(_chunk)
                if _size != _record.size or _hash.hexdigest() != _record.sha256:
                    raise StagingIntegrityError("Digest mismatch for '{}'".format(_member.name))
                _seen[_member.name] = _record
    except (tarfile.TarError, EOFError, zlib.error, ValueError) as _e:
        raise StagingIntegrityError("Archive '{}' is corrupt: {}".format(archive, _e))
    if _manifest is None:
        raise StagingIntegrityError("Archive '{}' has no manifest".format(archive))
    _missing = sorted(set(_expected) - set(_seen))
    if _missing:
        raise StagingIntegrityError("Archive lacks file(s) listed in its manifest: {}".format(_missing))
    return _manifest


def unpack(archive, dest_dir):
    """
    Restore the files of an archive below `dest_dir` and verify every digest.

    `dest_dir` must be absent or empty. On any error it is left as it was found.

    :rtype: :py:class:`StagingManifest`
    """
    if not os.path.isfile(archive):
        raise StagingNotFoundError("Archive not found: '{}'".format(archive))
    _created_dest = False
    if os.path.exists(dest_dir):
        if not os.path.isdir(dest_dir) or os.listdir(dest_dir):
            raise StagingPathError("Destination '{}' exists and is not an empty directory".format(dest_dir))
    else:
        try:
            os.makedirs(dest_dir)
        except OSError as _e:
            raise StagingError("Cannot create destination '{}': {}".format(dest_dir, _e))
        _created_dest = True
    _tmp = None
    try:
        _tmp = tempfile.mkdtemp(prefix='.unpack-', dir=dest_dir)
        _verify_stream(archive)
        _manifest = _extract(archive, _tmp)
        for _name in sorted(os.listdir(_tmp)):
            os.replace(os.path.join(_tmp, _name), os.path.join(dest_dir, _name))
        os.rmdir(_tmp)
    except BaseException as _e:
        if _tmp is not None:
            shutil.rmtree(_tmp, ignore_errors=True)
        if _created_dest:
            shutil.rmtree(dest_dir, ignore_errors=True)
        if isinstance(_e, (IOError, OSError)) and not isinstance(_e, StagingError):
            raise StagingError("Cannot unpack into '{}': {}".format(dest_dir, _e))
        raise
    logger.info("Unpacked %d file(s) into '%s'", _manifest.count, dest_dir)
    return _manifest


def stage_with_receipt(directory, destination_dir):
    """:py:func:`stage` returning ``(manifest, transfer receipt)``"""
    _work = tempfile.mkdtemp(prefix='asf-stage-')
    try:
        _archive, _ = package(directory, os.path.join(_work, 'payload.tar.gz'))
        _landing = os.path.join(_work, 'landing')
        os.mkdir(_landing)
        _receipt = transfer(_archive, _landing)
        _manifest = unpack(_receipt.path, destination_dir)
    finally:
        shutil.rmtree(_work, ignore_errors=True)
    return _manifest, _receipt


def stage(directory, destination_dir):
    """
    Package `directory`, transfer the archive and unpack it to `destination_dir`.

    :rtype: :py:class:`StagingManifest`
    """
    return stage_with_receipt(directory, destination_dir)[0]
