"""
Cache Agent
Disk cache of graded components, one JSON file per component
"""

from typing import Dict, List, Optional
from datetime import datetime
import json
import logging
import os
import tempfile

logger = logging.getLogger(__name__)

DEFAULT_CACHE_DIR = "cache"
CACHE_DIR_ENV = "NICHOLS_CACHE_DIR"


class CacheAgent:
    """Persist and reload graded components"""

    def __init__(self, cache_dir: Optional[str] = None):
        self.cache_dir = cache_dir or os.environ.get(CACHE_DIR_ENV) or DEFAULT_CACHE_DIR
        # Create cache directory if it doesn't exist
        os.makedirs(self.cache_dir, exist_ok=True)

    def _filename(self, kind: str, matrix_hash: str, degree: int, version: int) -> str:
        return f"{kind}_{matrix_hash}_d{degree}_v{version}.json"

    def save_component(self, kind: str, matrix_hash: str, degree: int, version: int,
                       payload: Dict, matrix=None) -> Dict:
        """
        Write one component

        Args:
            kind: 'nichols' or 'quadratic'
            matrix_hash: Canonical hash of the Coxeter matrix
            degree: Component degree
            version: Cache format version
            payload: Component data (candidates, basis, kernel)
            matrix: Optional Coxeter matrix recorded in the metadata

        Returns:
            Success/failure with file details
        """
        filename = self._filename(kind, matrix_hash, degree, version)
        filepath = os.path.join(self.cache_dir, filename)
        data = {
            'metadata': {
                'format_version': version,
                'kind': kind,
                'matrix_hash': matrix_hash,
                'matrix': [list(row) for row in matrix] if matrix else None,
                'degree': degree,
                'created_at': datetime.now().isoformat(),
            },
            'candidates': payload['candidates'],
            'basis': payload['basis'],
            'kernel': payload['kernel'],
            'prev_dimension': payload.get('prev_dimension', 1),
        }

        try:
            # Write to a temporary file in the same directory, then swap in
            fd, tmp_path = tempfile.mkstemp(dir=self.cache_dir, suffix='.tmp')
            with os.fdopen(fd, 'w', encoding='utf-8') as f:
                json.dump(data, f, separators=(',', ':'))
            os.replace(tmp_path, filepath)
        except OSError as e:
            logger.warning("could not write cache file %s: %s", filepath, e)
            return {
                'success': False,
                'error': str(e)
            }

        logger.debug("cached %s", filename)
        return {
            'success': True,
            'filename': filename,
            'filepath': filepath,
            'size_bytes': os.path.getsize(filepath)
        }

    def load_component(self, kind: str, matrix_hash: str, degree: int, version: int) -> Optional[Dict]:
        """
        Read one component

        Returns:
            Payload dict with 'degree', or None if absent or unreadable
        """
        filepath = os.path.join(self.cache_dir, self._filename(kind, matrix_hash, degree, version))
        if not os.path.exists(filepath):
            return None

        try:
            with open(filepath, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            logger.warning("ignoring unreadable cache file %s: %s", filepath, e)
            return None

        metadata = data.get('metadata', {})
        if metadata.get('format_version') != version or metadata.get('kind') != kind:
            return None

        return {
            'degree': metadata['degree'],
            'prev_dimension': data.get('prev_dimension', 1),
            'candidates': data['candidates'],
            'basis': data['basis'],
            'kernel': data['kernel'],
        }

    def list_entries(self) -> Dict:
        """
        List all cached components

        Returns:
            Result dict with 'entries' (newest first)
        """
        try:
            entries = []
            for filename in os.listdir(self.cache_dir):
                if filename.endswith('.json'):
                    filepath = os.path.join(self.cache_dir, filename)
                    file_size = os.path.getsize(filepath)
                    file_time = os.path.getmtime(filepath)

                    entries.append({
                        'filename': filename,
                        'size_bytes': file_size,
                        'modified_at': datetime.fromtimestamp(file_time).isoformat()
                    })

            # Sort by modification time (newest first)
            entries.sort(key=lambda x: (x['modified_at'], x['filename']), reverse=True)

            return {
                'success': True,
                'cache_dir': self.cache_dir,
                'entries': entries
            }

        except OSError as e:
            return {
                'success': False,
                'error': str(e)
            }

    def entry_info(self, filename: str) -> Dict:
        """
        Detailed information about one cache file

        Args:
            filename: Cache filename

        Returns:
            Metadata plus basis and kernel sizes
        """
        filepath = os.path.join(self.cache_dir, filename)

        if not os.path.exists(filepath):
            return {
                'success': False,
                'error': 'Cache file not found'
            }

        try:
            with open(filepath, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            return {
                'success': False,
                'error': str(e)
            }

        return {
            'success': True,
            'filename': filename,
            'metadata': data.get('metadata', {}),
            'candidates': len(data.get('candidates', [])),
            'dimension': len(data.get('basis', [])),
            'kernel_rows': len({entry[0] for entry in data.get('kernel', [])})
        }

    def clear(self) -> Dict:
        """
        Delete every cache file

        Returns:
            Result dict with the number of removed files
        """
        removed = 0
        try:
            for filename in os.listdir(self.cache_dir):
                if filename.endswith('.json') or filename.endswith('.tmp'):
                    os.remove(os.path.join(self.cache_dir, filename))
                    removed += 1
        except OSError as e:
            return {
                'success': False,
                'error': str(e),
                'removed': removed
            }

        logger.info("cleared %d cache files from %s", removed, self.cache_dir)
        return {
            'success': True,
            'message': 'Cache cleared',
            'removed': removed
        }
