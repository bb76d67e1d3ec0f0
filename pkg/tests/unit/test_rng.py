"""
Unit tests for seeded random streams and content digests.
"""

import hashlib
import os
import tempfile

import pytest

from ltlf_datagen.utils import IMAGE, SOLUTION, WALK, derive_rng, shuffled, uniform_choice
from ltlf_datagen.utils.digest import sha256_bytes, sha256_file, sha256_text


class TestDeriveRng:
    """Tests for key-path random streams"""

    def test_same_key_same_stream(self):
        """Test that equal seeds and keys give equal draws"""
        first = derive_rng(7, 0, 3, WALK).integers(1_000_000, size=8)
        second = derive_rng(7, 0, 3, WALK).integers(1_000_000, size=8)
        assert first.tolist() == second.tolist()

    @pytest.mark.parametrize('other', [(8, 0, 3, WALK), (7, 1, 3, WALK), (7, 0, 4, WALK), (7, 0, 3, IMAGE)])
    def test_different_key_different_stream(self, other):
        """Test that changing the seed or any key element changes the draws"""
        base = derive_rng(7, 0, 3, WALK).integers(1_000_000, size=8)
        changed = derive_rng(*other).integers(1_000_000, size=8)
        assert base.tolist() != changed.tolist()

    def test_streams_do_not_share_state(self):
        """Test that drawing from one stream leaves another unchanged"""
        expected = derive_rng(7, 0, 0, SOLUTION).random(4).tolist()
        noisy = derive_rng(7, 0, 0, WALK)
        noisy.random(100)
        assert derive_rng(7, 0, 0, SOLUTION).random(4).tolist() == expected


class TestSelection:
    """Tests for uniform_choice and shuffled"""

    def test_uniform_choice_returns_member(self):
        """Test that every choice is an element of the sequence"""
        rng = derive_rng(1, 0)
        items = ('a', 'b', 'c')
        assert all(uniform_choice(rng, items) in items for _ in range(50))

    def test_uniform_choice_reaches_every_item(self):
        """Test that repeated choices cover a small sequence"""
        rng = derive_rng(1, 1)
        seen = {uniform_choice(rng, [0, 1, 2, 3]) for _ in range(200)}
        assert seen == {0, 1, 2, 3}

    def test_shuffled_is_permutation(self):
        """Test that shuffled keeps every element and leaves the input alone"""
        items = list(range(20))
        result = shuffled(derive_rng(2, 0), items)
        assert sorted(result) == items
        assert items == list(range(20))

    def test_shuffled_is_reproducible(self):
        """Test that the same stream gives the same order"""
        assert shuffled(derive_rng(3, 5), list('abcdef')) == shuffled(derive_rng(3, 5), list('abcdef'))


class TestDigests:
    """Tests for sha256 helpers"""

    def test_text_matches_hashlib(self):
        """Test that text digests hash the UTF-8 bytes"""
        assert sha256_text('¬p') == hashlib.sha256('¬p'.encode('utf-8')).hexdigest()
        assert sha256_bytes(b'') == hashlib.sha256(b'').hexdigest()

    def test_file_matches_bytes(self):
        """Test that a file digest equals the digest of its content"""
        data = b'label,image\n' * 10_000
        with tempfile.TemporaryDirectory() as tmpdir:
            path = os.path.join(tmpdir, 'train.csv')
            with open(path, 'wb') as handle:
                handle.write(data)
            assert sha256_file(path) == sha256_bytes(data)


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
