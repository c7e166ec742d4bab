"""
Unit tests for DOT and text rendering of singular loci.

Run with: python -m pytest test_locus_render.py -v
Or: python test_locus_render.py
"""

import os
import tempfile
import unittest

from action import ActionSpec, singular_locus
from locus_render import HEXAGON_ORDER, ascii_hexagon, locus_to_dot, write_dot
from space import PERM_BY_NAME, WeightPair, incident_vertices


def sphere_locus():
    return singular_locus(WeightPair((1, 1, 5), (0, 0, 7)), ActionSpec((0, 1, 1), (0, 0, 2)))


class TestHexagon(unittest.TestCase):
    """Test the hexagon layout."""

    def test_neighbours_share_a_face(self):
        """Test consecutive circles of the hexagon are joined by a lens space."""
        for k, name in enumerate(HEXAGON_ORDER):
            a = PERM_BY_NAME[name]
            b = PERM_BY_NAME[HEXAGON_ORDER[(k + 1) % 6]]
            self.assertNotEqual(a.parity, b.parity)
            self.assertTrue(any(a(i) == b(i) for i in (1, 2, 3)))
            shared = [i for i in (1, 2, 3) if a(i) == b(i)]
            self.assertIn(a, incident_vertices(shared[0], a(shared[0])))


class TestDot(unittest.TestCase):
    """Test locus_to_dot and write_dot."""

    def test_structure(self):
        """Test six nodes, nine edges and the red singular sphere."""
        dot = locus_to_dot(sphere_locus(), title='E5')
        lines = dot.splitlines()
        self.assertEqual(lines[0], 'graph "E5" {')
        self.assertEqual(lines[-1], '}')
        self.assertEqual(sum(1 for line in lines if ' -- ' in line), 9)
        self.assertEqual(sum(1 for line in lines if 'pos=' in line), 6)
        edge = [line for line in lines if line.strip().startswith('C_13 -- C_132')]
        self.assertEqual(len(edge), 1)
        self.assertIn('color=red', edge[0])
        self.assertIn('L_13 Z_4 smooth', edge[0])

    def test_write(self):
        """Test the file holds the same text."""
        locus = sphere_locus()
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'locus.dot')
            write_dot(locus, path, title='E5')
            with open(path, 'r', encoding='utf-8') as f:
                self.assertEqual(f.read(), locus_to_dot(locus, title='E5'))


class TestAscii(unittest.TestCase):
    """Test the text hexagon."""

    def test_marks(self):
        """Test singular circles and the smooth sphere are marked."""
        text = ascii_hexagon(sphere_locus())
        self.assertIn('[(13)*4]', text)
        self.assertIn('[(132)*4]', text)
        self.assertIn('L13=4s', text)
        self.assertIn('[id]', text)
        self.assertIn('kernel Z_1', text)


if __name__ == '__main__':
    unittest.main()
