/** Display formatting. Values are engine-reported, never recomputed. */
/** Compact numeric display: up to 5 significant digits, no trailing noise. */
export function formatValue(value) {
    if (Number.isInteger(value))
        return String(value);
    return String(Number(value.toPrecision(5)));
}
export function unitLabel(unit) {
    return unit === "kilometers" ? "km" : "within radius";
}
/** Exposure phrased for a tooltip or table cell, e.g. "3.2 km" / "2 within radius". */
export function formatExposure(hs, unit) {
    return `${formatValue(hs)} ${unitLabel(unit)}`;
}
export function formatShare(share) {
    if (share === null)
        return "not reported";
    return `${formatValue(share * 100)}%`;
}
