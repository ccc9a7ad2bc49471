import json
import os
import unittest

from six import StringIO

from asf.core import ServiceEntry
from asf.io import IOStreamHandle
from asf.representation import get_reader, get_writer, DReprError, format_from_filename, read_file, write_file
from asf.representation.entry import EntryJsonReader, EntryJsonWriter
from asf.test.tools import make_entry, ENTRY_ID, TempDirTestMixin


TEST_ENTRY_DOCUMENT = """
{
  "id": "5f2b6a4e-7c1d-4e8a-9b3f-2d6c8e1a0f47",
  "name": "eq-forecast",
  "title": "Earthquake forecast",
  "public": true,
  "created": "2021-03-01T12:00:00Z",
  "modified": "2021-03-02T08:30:00Z",
  "tags": ["earthquake", "forecasting"],
  "heartbeat": {"state": "alive", "checked_at": "2021-03-02T08:30:00Z"},
  "entry_class": "instantiated-service"
}
"""

TEST_ENTRY_DOCUMENT_EXTRA_KEYWORD = """
{"id": "5f2b6a4e-7c1d-4e8a-9b3f-2d6c8e1a0f47", "name": "eq-forecast", "colour": "blue"}
"""

TEST_ENTRY_DOCUMENT_BAD_TIMESTAMP = """
{"name": "eq-forecast", "created": "yesterday"}
"""


class TestEntryJsonRepresenter(unittest.TestCase):

    def setUp(self):
        self._entry = make_entry()

    def _read(self, text):
        return EntryJsonReader(IOStreamHandle(StringIO(text))).read()

    def test_read_document(self):
        _entry = self._read(TEST_ENTRY_DOCUMENT)
        self.assertEqual(_entry.id, ENTRY_ID)
        self.assertEqual(_entry.tags, ('earthquake', 'forecasting'))
        self.assertTrue(_entry.heartbeat.alive)
        self.assertEqual(_entry.created.year, 2021)
        self.assertIsNone(_entry.endpoint)

    def test_write_omits_absent_attributes(self):
        _buffer = StringIO()
        EntryJsonWriter(self._entry._replace(sla=None, author=None), IOStreamHandle(_buffer)).write()
        _document = json.loads(_buffer.getvalue())
        self.assertNotIn('sla', _document)
        self.assertNotIn('author', _document)
        self.assertEqual(_document['modified'], '2021-03-02T08:30:00Z')

    def test_document_reproduces_entry(self):
        self.assertEqual(ServiceEntry.from_document(self._entry.to_document()), self._entry)

    def test_extra_keyword_raises(self):
        with self.assertRaises(DReprError):
            self._read(TEST_ENTRY_DOCUMENT_EXTRA_KEYWORD)

    def test_bad_timestamp_raises(self):
        with self.assertRaises(DReprError):
            self._read(TEST_ENTRY_DOCUMENT_BAD_TIMESTAMP)

    def test_unknown_representation(self):
        with self.assertRaises(DReprError):
            get_writer('spaceship', 'json')
        with self.assertRaises(DReprError):
            get_reader('entry', 'xml')


class TestFileRepresentation(TempDirTestMixin, unittest.TestCase):

    def test_format_from_filename(self):
        self.assertEqual([format_from_filename(_f) for _f in ('a.json', 'b.YAML', 'c.yml', 'd.txt')],
                         ['json', 'yaml', 'yaml', None])
        self.assertEqual(format_from_filename('store', default='json'), 'json')

    def test_file_round_trip(self):
        _filename = os.path.join(self._tmp_dir, 'entry.json')
        write_file(make_entry(), 'entry', _filename)
        self.assertEqual(read_file('entry', _filename).id, ENTRY_ID)

    def test_unknown_extension(self):
        with self.assertRaises(DReprError):
            read_file('entry', os.path.join(self._tmp_dir, 'entry.dat'))
