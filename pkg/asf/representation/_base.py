import abc
import six

__all__ = ['DReprError', 'GenericDReprBase', 'DReprWriterMixin', 'DReprReaderMixin']


class DReprError(Exception):
    pass


@six.add_metaclass(abc.ABCMeta)
class GenericDReprBase(object):
    BASE_OBJECT_TYPE_NAME = None
    DREPR_FLAVOR_NAME = None
    DREPR_ROLE_NAME = None

    # document keys accepted by readers; `None` disables the check
    KNOWN_KEYWORDS = None
    REQUIRED_KEYWORDS = ()

    @classmethod
    def _register_class(cls, global_dict):
        _registered_roles = global_dict.setdefault(cls.BASE_OBJECT_TYPE_NAME, dict())
        _registered_formats_for_role = _registered_roles.setdefault(cls.DREPR_ROLE_NAME, dict())
        _registered_formats_for_role[cls.DREPR_FLAVOR_NAME] = cls


class DReprWriterMixin(object):
    """
    Writer half of a representation: turns an object into a document and dumps it to a handle.
    Concrete writers list this mixin before the object type base and the format mixin.
    """

    DREPR_ROLE_NAME = 'writer'

    def __init__(self, asf_object, output_io_handle, *args, **kwargs):
        """
        :param asf_object: the object to write
        :param output_io_handle: handle for output stream or file
        :type output_io_handle: :py:class:`~asf.io.IOStreamHandle`-derived
        """
        self._asf_object = asf_object
        self._ohandle = output_io_handle
        self._document = None
        super(DReprWriterMixin, self).__init__(*args, **kwargs)

    @classmethod
    def make_document(cls, asf_object):
        """Create the document (plain dicts/lists/scalars) representing an object."""
        raise NotImplementedError

    @classmethod
    def _dump(cls, document, output_stream):
        """serialize `document` to an open stream (format mixins)"""
        raise NotImplementedError

    def write(self):
        self._document = self.make_document(self._asf_object)
        with self._ohandle as _h:
            self._dump(self._document, _h)


class DReprReaderMixin(object):
    """
    Reader half of a representation: loads a document from a handle, checks its keys against
    :py:attr:`REQUIRED_KEYWORDS` and :py:attr:`KNOWN_KEYWORDS` and builds the object.
    """

    DREPR_ROLE_NAME = 'reader'

    def __init__(self, input_io_handle, *args, **kwargs):
        """
        :param input_io_handle: handle for input stream or file
        :type input_io_handle: :py:class:`~asf.io.IOStreamHandle`-derived
        """
        self._ihandle = input_io_handle
        self._document = None
        super(DReprReaderMixin, self).__init__(*args, **kwargs)

    @classmethod
    def _load(cls, input_stream):
        """parse a document from an open stream (format mixins)"""
        raise NotImplementedError

    @classmethod
    def _convert_document_to_object(cls, document):
        """build the object from a document whose keys have been checked (object type bases)"""
        raise NotImplementedError

    @classmethod
    def _check_keywords(cls, document):
        if not isinstance(document, dict):
            raise DReprError("Cannot read {} object: expected a mapping, got {}!".format(
                cls.BASE_OBJECT_TYPE_NAME, type(document).__name__))
        _missing_keywords = [_k for _k in cls.REQUIRED_KEYWORDS if _k not in document]
        if _missing_keywords:
            raise DReprError("Missing required information for reading in a {} object: {}".format(
                cls.BASE_OBJECT_TYPE_NAME, _missing_keywords))
        if cls.KNOWN_KEYWORDS is not None:
            _unknown_keywords = sorted(set(document) - set(cls.KNOWN_KEYWORDS))
            if _unknown_keywords:
                raise DReprError("Received unknown or unsupported keywords for constructing a {} object: {}".format(
                    cls.BASE_OBJECT_TYPE_NAME, _unknown_keywords))

    @classmethod
    def make_object(cls, document):
        """Create an object from its document representation."""
        cls._check_keywords(document)
        return cls._convert_document_to_object(dict(document))

    def read(self):
        with self._ihandle as _h:
            self._document = self._load(_h)
        return self.make_object(self._document)
