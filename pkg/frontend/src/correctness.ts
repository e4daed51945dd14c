/** Score arithmetic matching the server's report maths digit for digit. */

/**
 * Percentage of the maximum score for a fully scored recipe.
 *
 * Each ingredient is worth at most 2 points, so `n` scores top out at
 * `2n`.  The result is rounded to two decimals with ties going to the
 * even hundredth — the same rounding the server applies when it builds
 * the report table, so the live figure shown while scoring is exactly
 * the number the report will print.
 */
export function correctnessPercent(scores: readonly number[], totalSteps: number): number {
  if (!Number.isInteger(totalSteps) || totalSteps <= 0) {
    throw new RangeError("correctness needs at least one scored step");
  }
  if (scores.length !== totalSteps) {
    throw new RangeError(`expected ${totalSteps} scores, got ${scores.length}`);
  }
  let sum = 0;
  for (const value of scores) {
    if (!Number.isInteger(value) || value < 0 || value > 2) {
      throw new RangeError(`scores must be 0, 1 or 2, got ${value}`);
    }
    sum += value;
  }
  // The exact percentage is sum*100 / (2n); in hundredths of a percent
  // that is sum*5000 / n, which stays well inside safe-integer range.
  return roundHalfEvenHundredths(sum * 5000, totalSteps);
}

/** Round numerator/denominator to the nearest integer, ties to even, then scale to percent. */
function roundHalfEvenHundredths(numerator: number, denominator: number): number {
  const quotient = Math.floor(numerator / denominator);
  const remainder = numerator - quotient * denominator;
  const twice = 2 * remainder;
  let hundredths = quotient;
  if (twice > denominator || (twice === denominator && quotient % 2 !== 0)) {
    hundredths = quotient + 1;
  }
  return hundredths / 100;
}

/** Format a percentage the way the report table prints it (two decimals). */
export function formatPercent(value: number): string {
  return value.toFixed(2);
}
