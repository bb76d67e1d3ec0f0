"""
Integration tests for the generate -> emit -> validate pipeline on bundled tasks.
"""

import csv
import json
import shutil
import tempfile
from collections import Counter
from pathlib import Path

import pytest

from ltlf_datagen.exceptions import DatasetFormatError
from ltlf_datagen.services.emitter import episode_dir_name
from ltlf_datagen.services.generator import generate_dataset
from ltlf_datagen.services.validator import stats, validate
from ltlf_datagen.spec.bundled import find_bundled
from ltlf_datagen.spec.loader import load_spec


@pytest.fixture(scope='module')
def task3_dir():
    """Generate task3_short once for the module."""
    with tempfile.TemporaryDirectory() as tmpdir:
        result = generate_dataset(find_bundled('task3_short'), tmpdir, workers=1, synthetic=True)
        yield Path(tmpdir), result


@pytest.fixture(scope='module')
def ccl_task1_dir():
    """Generate ccl_task1_mnist once for the module."""
    with tempfile.TemporaryDirectory() as tmpdir:
        result = generate_dataset(find_bundled('ccl_task1_mnist'), tmpdir, workers=2, synthetic=True)
        yield Path(tmpdir), result


@pytest.fixture(scope='module')
def ccl_task2_dir():
    """Generate ccl_task2_mnist once for the module."""
    with tempfile.TemporaryDirectory() as tmpdir:
        result = generate_dataset(find_bundled('ccl_task2_mnist'), tmpdir, synthetic=True)
        yield Path(tmpdir), result


def read_rows(path):
    with open(path, newline='', encoding='utf-8') as handle:
        return list(csv.DictReader(handle))


def write_rows(path, rows):
    with open(path, 'w', newline='', encoding='utf-8') as handle:
        writer = csv.DictWriter(handle, fieldnames=list(rows[0]), lineterminator='\n')
        writer.writeheader()
        writer.writerows(rows)


class TestSequentialGeneration:
    """Tests for a generated sequential task."""

    def test_generation_validates(self, task3_dir):
        """Test that a fresh dataset has no violations."""
        out_dir, result = task3_dir
        assert result.report.ok, [str(v) for v in result.report.violations]
        assert result.report.checked == 400
        assert result.automaton.num_states == 5

    def test_split_counts_lengths_and_balance(self, task3_dir):
        """Test counts, length range and ceil(N/2) positives per split."""
        out_dir, _ = task3_dir
        for split, count in (('train', 320), ('val', 40), ('test', 40)):
            rows = read_rows(out_dir / f'{split}.csv')
            lengths = Counter(row['seq_id'] for row in rows)
            labels = {row['seq_id']: row['seq_label'] for row in rows}
            assert len(lengths) == count
            assert all(10 <= n <= 20 for n in lengths.values())
            assert sum(label == '1' for label in labels.values()) == count // 2

    def test_stats(self, task3_dir):
        """Test that stats agree with the emitted files."""
        out_dir, _ = task3_dir
        report = stats(out_dir).to_dict()
        assert report['mode'] == 'sequential'
        train = report['splits']['train']
        assert train['sequences'] == 320
        assert train['positives'] == 160
        assert train['negatives'] == 160
        assert sum(train['lengths'].values()) == 320
        assert all(10 <= int(k) <= 20 for k in train['lengths'])
        assert set(train['truth_frequency']) == {'p', 'q'}
        assert all(0.0 <= v <= 1.0 for v in train['truth_frequency'].values())

    def test_run_manifest(self, task3_dir):
        """Test the run metadata."""
        _, result = task3_dir
        run = result.run_manifest()
        assert run['seed'] == 1003
        assert run['valid'] is True
        assert run['states'] == 5
        assert run['cache']['misses'] >= 1
        assert run['files'] == result.manifest['files']

    def test_flipped_truth_is_reported(self, task3_dir):
        """Test that corrupting one constraint cell gives exactly one violation."""
        out_dir, _ = task3_dir
        with tempfile.TemporaryDirectory() as tmpdir:
            copy_dir = Path(tmpdir) / 'copy'
            shutil.copytree(out_dir, copy_dir)
            rows = read_rows(copy_dir / 'train.csv')
            rows[3]['c_p'] = '0' if rows[3]['c_p'] == '1' else '1'
            write_rows(copy_dir / 'train.csv', rows)
            report = validate(copy_dir)
        assert len(report.violations) == 1
        assert report.violations[0].field == 'c_p'
        assert report.violations[0].location == f"{rows[3]['seq_id']} t={rows[3]['t']}"

    def test_flipped_sequence_label_is_reported(self, task3_dir):
        """Test that a wrong sequence label fails acceptance and balance."""
        out_dir, _ = task3_dir
        with tempfile.TemporaryDirectory() as tmpdir:
            copy_dir = Path(tmpdir) / 'copy'
            shutil.copytree(out_dir, copy_dir)
            rows = read_rows(copy_dir / 'val.csv')
            for row in rows:
                if row['seq_id'] == 'val-00000':
                    row['seq_label'] = '0'
            write_rows(copy_dir / 'val.csv', rows)
            report = validate(copy_dir)
        assert {v.field for v in report.violations} == {'seq_label', 'balance'}

    def test_missing_split_file(self, task3_dir):
        """Test that a missing CSV raises DatasetFormatError."""
        out_dir, _ = task3_dir
        with tempfile.TemporaryDirectory() as tmpdir:
            copy_dir = Path(tmpdir) / 'copy'
            shutil.copytree(out_dir, copy_dir)
            (copy_dir / 'test.csv').unlink()
            with pytest.raises(DatasetFormatError):
                validate(copy_dir)

    def test_output_independent_of_workers(self):
        """Test that worker count never changes the emitted files."""
        spec = find_bundled('task1_short')
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            one = generate_dataset(spec, first, workers=1, synthetic=True)
            four = generate_dataset(spec, second, workers=4, synthetic=True)
        assert one.manifest['files'] == four.manifest['files']

    def test_seed_override_changes_output(self):
        """Test that another seed yields another dataset."""
        spec = find_bundled('task1_short')
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            default = generate_dataset(spec, first, synthetic=True)
            other = generate_dataset(spec, second, seed=spec.seed + 1, synthetic=True)
        assert default.manifest['files']['train.csv'] != other.manifest['files']['train.csv']
        assert other.manifest['seed'] == spec.seed + 1

    def test_stored_spec_reproduces_overridden_run(self):
        """Test that regenerating from spec.json of an overridden run gives the same files."""
        spec = find_bundled('task1_short')
        with tempfile.TemporaryDirectory() as first, tempfile.TemporaryDirectory() as second:
            original = generate_dataset(spec, first, seed=spec.seed + 1, synthetic=True)
            stored = load_spec((Path(first) / 'spec.json').read_text())
            again = generate_dataset(stored, second, synthetic=True)
        assert stored.seed == spec.seed + 1
        assert again.manifest['files'] == original.manifest['files']


class TestIncrementalGeneration:
    """Tests for a generated curriculum task."""

    def test_generation_validates(self, ccl_task1_dir):
        """Test that the curriculum dataset has no violations."""
        _, result = ccl_task1_dir
        assert result.report.ok, [str(v) for v in result.report.violations]
        assert result.report.checked == 30

    def test_curriculum_document(self, ccl_task1_dir):
        """Test the emitted curriculum: one zero episode after the first, both orphans scheduled."""
        out_dir, _ = ccl_task1_dir
        document = json.loads((out_dir / 'curriculum.json').read_text())
        assert document['episodes'] == 10
        assert len(document['states']) == 11
        zero_episodes = [i for i, truths in enumerate(document['constraint_truths']) if truths.get('zero')]
        assert len(zero_episodes) == 1
        assert zero_episodes[0] > 0
        assert set(document['orphan_schedule']) == {'even', 'odd'}
        assert all(document['orphan_schedule'].values())
        assert document['uncovered_orphans'] == []

    def test_episode_splits(self, ccl_task1_dir):
        """Test that every episode holds 800/100/100 samples."""
        out_dir, _ = ccl_task1_dir
        for index in range(10):
            for split, count in (('train', 800), ('val', 100), ('test', 100)):
                rows = read_rows(out_dir / f'episode_{index:02d}' / f'{split}.csv')
                assert len({row['sample_id'] for row in rows}) == count

    def test_zero_episode_labels(self, ccl_task1_dir):
        """Test that the zero episode only shows zeros and the others never do."""
        out_dir, _ = ccl_task1_dir
        document = json.loads((out_dir / 'curriculum.json').read_text())
        for index, truths in enumerate(document['constraint_truths']):
            labels = {row['label'] for row in read_rows(out_dir / f'episode_{index:02d}' / 'train.csv')}
            if truths.get('zero'):
                assert labels == {'0'}
            else:
                assert '0' not in labels

    def test_stats(self, ccl_task1_dir):
        """Test the per-episode label histograms."""
        out_dir, _ = ccl_task1_dir
        report = stats(out_dir).to_dict()
        assert report['mode'] == 'incremental'
        assert len(report['episodes']) == 10
        assert report['splits']['train']['samples'] == 8000
        histogram = report['episodes'][0]['splits']['val']['Y']
        assert sum(histogram.values()) == 100

    def test_orphan_ratio(self, ccl_task2_dir):
        """Test that orphan episodes show the orphan in the requested share of samples."""
        out_dir, result = ccl_task2_dir
        assert result.report.ok, [str(v) for v in result.report.violations]
        document = json.loads((out_dir / 'curriculum.json').read_text())
        assert document['episodes'] == 20
        assert set(document['orphan_schedule']) == {'r', 's'}
        assert document['orphan_positive_ratio'] == 0.5
        for index in document['orphan_schedule']['r']:
            rows = read_rows(out_dir / episode_dir_name(index) / 'val.csv')
            assert sum(row['label'] in ('6', '7', '8') for row in rows) == 50

    def test_extra_orphan_sample_is_reported(self, ccl_task2_dir):
        """Test that one sample too many satisfying the orphan gives exactly one violation."""
        out_dir, _ = ccl_task2_dir
        document = json.loads((out_dir / 'curriculum.json').read_text())
        index = document['orphan_schedule']['r'][0]
        with tempfile.TemporaryDirectory() as tmpdir:
            copy_dir = Path(tmpdir) / 'copy'
            shutil.copytree(out_dir, copy_dir)
            path = copy_dir / episode_dir_name(index) / 'val.csv'
            rows = read_rows(path)
            row = next(row for row in rows if row['label'] not in ('6', '7', '8'))
            row['label'] = '7'
            write_rows(path, rows)
            report = validate(copy_dir)
        assert len(report.violations) == 1
        assert report.violations[0].field == 'c_r'
        assert report.violations[0].location == f'episode {index} val'


if __name__ == '__main__':
    pytest.main([__file__, '-v'])
