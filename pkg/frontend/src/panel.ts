/**
 * Zone detail panel: the engine's zone summary plus the per-school
 * decomposition (pss, exposure, score) for every school in the zone.
 */

import { formatShare, formatValue, unitLabel } from "./format.js";
import type { ExposureUnit, SchoolRow, ZoneProperties } from "./types.js";

export function renderZonePanel(
  container: HTMLElement,
  zone: ZoneProperties,
  rows: SchoolRow[],
  unit: ExposureUnit,
): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  container.removeAttribute("hidden");

  const heading = doc.createElement("h2");
  heading.textContent = `${zone.name} (${zone.zone_id})`;
  container.appendChild(heading);

  const summary = doc.createElement("dl");
  summary.className = "zone-summary";
  addRow(summary, "Collective burden", formatValue(zone.cpb), { "data-cpb": String(zone.cpb) });
  addRow(summary, "Class", zone.class_label, { "data-class-index": String(zone.class_index) });
  addRow(summary, "Schools", String(zone.n_schools));
  addRow(summary, "Latinx share", formatShare(zone.latinx_share));
  container.appendChild(summary);

  if (rows.length === 0) {
    const empty = doc.createElement("p");
    empty.className = "empty-note";
    empty.textContent = "No schools in this zone.";
    container.appendChild(empty);
    return;
  }

  const table = doc.createElement("table");
  table.className = "school-table";
  const thead = doc.createElement("thead");
  const headRow = doc.createElement("tr");
  for (const label of ["School", "Local share", `Exposure (${unitLabel(unit)})`, "Score"]) {
    const th = doc.createElement("th");
    th.textContent = label;
    headRow.appendChild(th);
  }
  thead.appendChild(headRow);
  table.appendChild(thead);

  const tbody = doc.createElement("tbody");
  for (const row of rows) {
    const tr = doc.createElement("tr");
    if (row.excluded) tr.className = "excluded";

    const nameCell = doc.createElement("td");
    nameCell.textContent = `${row.name} (${row.school_id})`;
    tr.appendChild(nameCell);

    const pssCell = doc.createElement("td");
    pssCell.textContent = row.pss === null ? "—" : formatValue(row.pss);
    tr.appendChild(pssCell);

    const hsCell = doc.createElement("td");
    hsCell.textContent = formatValue(row.hs);
    tr.appendChild(hsCell);

    const scoreCell = doc.createElement("td");
    if (row.score === null) {
      scoreCell.textContent = row.reason ?? "—";
    } else {
      scoreCell.textContent = formatValue(row.score);
      scoreCell.setAttribute("data-score", String(row.score));
    }
    tr.appendChild(scoreCell);
    tbody.appendChild(tr);
  }
  table.appendChild(tbody);
  container.appendChild(table);
}

export function renderPanelError(container: HTMLElement, message: string): void {
  const doc = container.ownerDocument;
  container.textContent = "";
  container.removeAttribute("hidden");
  const error = doc.createElement("p");
  error.className = "panel-error";
  error.textContent = message;
  container.appendChild(error);
}

export function clearPanel(container: HTMLElement): void {
  container.textContent = "";
  container.setAttribute("hidden", "");
}

function addRow(
  list: HTMLDListElement,
  term: string,
  value: string,
  attrs: Record<string, string> = {},
): void {
  const doc = list.ownerDocument;
  const dt = doc.createElement("dt");
  dt.textContent = term;
  const dd = doc.createElement("dd");
  dd.textContent = value;
  for (const [name, attrValue] of Object.entries(attrs)) {
    dd.setAttribute(name, attrValue);
  }
  list.appendChild(dt);
  list.appendChild(dd);
}
