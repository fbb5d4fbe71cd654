/**
 * Incremental line splitter for stream chunks.
 *
 * Chunks may end mid-line; the remainder is buffered until the next chunk
 * completes it. Blank lines are dropped.
 */
export function createLineParser(
  onLine: (line: string) => void
): (chunk: Buffer | string) => void {
  let buffer = '';

  return (chunk: Buffer | string): void => {
    buffer += chunk.toString();
    const lines = buffer.split('\n');
    buffer = lines.pop() ?? '';

    for (const line of lines) {
      if (line.trim()) {
        onLine(line);
      }
    }
  };
}
