/**
 * Dashboard controller: wires the controls, the map, the legend, and the
 * zone panel to the burden API.
 *
 * Data flow is one-directional. Control changes produce a new ViewState;
 * the state maps to a request (a pure function of the state); responses
 * are rendered only if no newer request has been issued since
 * (last-write-wins). The URL always mirrors the current state, so a view
 * can be bookmarked and back/forward navigation replays prior states.
 */
import { ApiRequestError, LatestGate } from "./api.js";
import { renderChoropleth, renderLegend } from "./map.js";
import { clearPanel, renderPanelError, renderZonePanel } from "./panel.js";
import { decodeState, defaultState, encodeState, isValidRadius, } from "./state.js";
function grab(doc, selector) {
    const el = doc.querySelector(selector);
    if (!el)
        throw new Error(`dashboard markup is missing ${selector}`);
    return el;
}
export class App {
    client;
    win;
    el;
    state;
    surface = null;
    surfaceGate = new LatestGate();
    panelGate = new LatestGate();
    inflight = new Set();
    constructor(doc, client, win) {
        this.client = client;
        this.win = win;
        this.el = {
            layer: grab(doc, "#layer"),
            radius: grab(doc, "#radius"),
            radiusError: grab(doc, "#radius-error"),
            scaleInputs: Array.from(doc.querySelectorAll('input[name="scale"]')),
            methodInputs: Array.from(doc.querySelectorAll('input[name="method"]')),
            k: grab(doc, "#k"),
            overlay: grab(doc, "#overlay"),
            zoomIn: grab(doc, "#zoom-in"),
            zoomOut: grab(doc, "#zoom-out"),
            banner: grab(doc, "#banner"),
            map: grab(doc, "#map"),
            legend: grab(doc, "#legend"),
            panel: grab(doc, "#panel"),
        };
        this.state = defaultState("");
        const onChange = () => this.onControlsChanged();
        this.el.layer.addEventListener("change", onChange);
        this.el.radius.addEventListener("change", onChange);
        for (const input of [...this.el.scaleInputs, ...this.el.methodInputs]) {
            input.addEventListener("change", onChange);
        }
        this.el.k.addEventListener("change", onChange);
        this.el.overlay.addEventListener("change", () => this.renderCurrent());
        this.el.zoomIn.addEventListener("click", () => this.zoomBy(2));
        this.el.zoomOut.addEventListener("click", () => this.zoomBy(0.5));
        this.win.addEventListener("popstate", () => {
            this.adoptState(decodeState(this.win.location.search, this.state));
        });
    }
    /** Fetch the dataset description, restore state from the URL, render. */
    async boot() {
        const layers = await this.client.layers();
        this.populateControls(layers);
        const firstLayer = layers.layers[0]?.id ?? "";
        this.state = decodeState(this.win.location.search, defaultState(firstLayer));
        this.applyStateToControls();
        await this.refreshSurface({ push: false, replace: true });
        await this.settle();
    }
    /** Snapshot of the current view state (for tests and debugging). */
    getState() {
        return JSON.parse(JSON.stringify(this.state));
    }
    /** Resolves when every request issued so far has landed or been discarded. */
    async settle() {
        while (this.inflight.size > 0) {
            await Promise.all(Array.from(this.inflight));
        }
    }
    // -- state transitions ------------------------------------------------------
    onControlsChanged() {
        const radiusMiles = Number(this.el.radius.value);
        if (!isValidRadius(radiusMiles)) {
            // rejected client-side: no request leaves the app
            this.el.radiusError.removeAttribute("hidden");
            return;
        }
        this.el.radiusError.setAttribute("hidden", "");
        const scale = (this.el.scaleInputs.find((i) => i.checked)?.value ??
            this.state.scale);
        const method = (this.el.methodInputs.find((i) => i.checked)?.value ??
            this.state.method);
        this.state = {
            ...this.state,
            layer: this.el.layer.value,
            radiusMiles,
            scale,
            method,
            k: Number(this.el.k.value),
        };
        this.refreshSurface({ push: true });
    }
    adoptState(state) {
        this.state = state;
        this.applyStateToControls();
        this.refreshSurface({ push: false });
    }
    zoomBy(factor) {
        const current = this.state.viewport;
        const center = current ?? this.fitCenter();
        if (!center)
            return;
        const zoom = (current?.zoom ?? 1) * factor;
        this.state = {
            ...this.state,
            viewport: zoom <= 1 ? null : { lon: center.lon, lat: center.lat, zoom },
        };
        this.syncUrl({ push: true });
        this.renderCurrent();
    }
    fitCenter() {
        if (!this.surface)
            return null;
        let minLon = Infinity;
        let maxLon = -Infinity;
        let minLat = Infinity;
        let maxLat = -Infinity;
        for (const feature of this.surface.features) {
            const polys = feature.geometry.type === "Polygon"
                ? [feature.geometry.coordinates]
                : feature.geometry.coordinates;
            for (const poly of polys) {
                for (const pt of poly[0] ?? []) {
                    minLon = Math.min(minLon, pt[0]);
                    maxLon = Math.max(maxLon, pt[0]);
                    minLat = Math.min(minLat, pt[1]);
                    maxLat = Math.max(maxLat, pt[1]);
                }
            }
        }
        if (!Number.isFinite(minLon))
            return null;
        return { lon: (minLon + maxLon) / 2, lat: (minLat + maxLat) / 2 };
    }
    // -- requests ---------------------------------------------------------------
    refreshSurface(opts) {
        this.syncUrl(opts);
        const ticket = this.surfaceGate.issue();
        const state = this.state;
        return this.track(async () => {
            let surface;
            try {
                surface = await this.client.burden(state);
            }
            catch (err) {
                if (this.surfaceGate.isCurrent(ticket))
                    this.showBanner(err);
                return; // previous surface stays on screen
            }
            if (!this.surfaceGate.isCurrent(ticket))
                return; // superseded
            this.hideBanner();
            this.surface = surface;
            if (state.zone !== null && !surface.features.some((f) => f.properties.zone_id === state.zone)) {
                // the zone does not exist at this scale; drop the selection
                this.state = { ...this.state, zone: null };
                this.syncUrl({ push: false, replace: true });
                clearPanel(this.el.panel);
            }
            this.renderCurrent();
            if (this.state.zone !== null)
                this.refreshPanel();
        });
    }
    refreshPanel() {
        const ticket = this.panelGate.issue();
        const state = this.state;
        const zoneId = state.zone;
        if (zoneId === null)
            return Promise.resolve();
        return this.track(async () => {
            try {
                const doc = await this.client.schools(state);
                if (!this.panelGate.isCurrent(ticket))
                    return;
                const feature = this.surface?.features.find((f) => f.properties.zone_id === zoneId);
                if (!feature || !this.surface)
                    return;
                const rows = doc.schools.filter((row) => row.zone === zoneId);
                renderZonePanel(this.el.panel, feature.properties, rows, this.surface.meta.exposure_unit);
            }
            catch (err) {
                if (!this.panelGate.isCurrent(ticket))
                    return;
                // panel-local failure; the map keeps its state
                renderPanelError(this.el.panel, messageOf(err));
            }
        });
    }
    selectZone(zoneId) {
        this.state = { ...this.state, zone: zoneId };
        this.syncUrl({ push: true });
        this.renderCurrent();
        this.refreshPanel();
    }
    // -- rendering --------------------------------------------------------------
    renderCurrent() {
        if (!this.surface)
            return;
        renderChoropleth(this.el.map, this.surface, {
            selectedZone: this.state.zone,
            viewport: this.state.viewport,
            showShareOverlay: this.el.overlay.checked,
            onZoneClick: (zoneId) => this.selectZone(zoneId),
        });
        renderLegend(this.el.legend, this.surface);
    }
    showBanner(err) {
        this.el.banner.textContent = messageOf(err);
        this.el.banner.removeAttribute("hidden");
    }
    hideBanner() {
        this.el.banner.textContent = "";
        this.el.banner.setAttribute("hidden", "");
    }
    // -- URL / controls sync ----------------------------------------------------
    syncUrl(opts) {
        const url = `?${encodeState(this.state)}`;
        if (opts.push) {
            this.win.history.pushState(null, "", url);
        }
        else if (opts.replace) {
            this.win.history.replaceState(null, "", url);
        }
        // popstate-driven updates pass neither: the URL is already correct
    }
    applyStateToControls() {
        this.el.layer.value = this.state.layer;
        this.el.radius.value = String(this.state.radiusMiles);
        for (const input of this.el.scaleInputs)
            input.checked = input.value === this.state.scale;
        for (const input of this.el.methodInputs)
            input.checked = input.value === this.state.method;
        this.el.k.value = String(this.state.k);
    }
    populateControls(layers) {
        const doc = this.el.layer.ownerDocument;
        this.el.layer.textContent = "";
        for (const layer of layers.layers) {
            const option = doc.createElement("option");
            option.value = layer.id;
            option.textContent = layer.title;
            this.el.layer.appendChild(option);
        }
        this.el.k.textContent = "";
        for (let k = 1; k <= 8; k += 1) {
            const option = doc.createElement("option");
            option.value = String(k);
            option.textContent = String(k);
            this.el.k.appendChild(option);
        }
        const available = new Set(layers.zone_sets.map((zs) => zs.scale));
        for (const input of this.el.scaleInputs) {
            input.disabled = !available.has(input.value);
        }
    }
    track(run) {
        const promise = run();
        this.inflight.add(promise);
        promise.finally(() => this.inflight.delete(promise));
        return promise;
    }
}
function messageOf(err) {
    if (err instanceof ApiRequestError)
        return err.message;
    if (err instanceof Error)
        return `request failed: ${err.message}`;
    return "request failed";
}
